use anyhow::{bail, Result};
use serde_json::{json, Value};
use spinelab::canon::CanonicalGraph;
use spinelab::complexes::{
    spine_query, spine_quotient_from_graphs, stabilization_chain_map, SpineComplex, SpineOptions, StabilizationKind,
};
use spinelab::enumerate::cache::EnumerationCache;
use spinelab::enumerate::{enumerate_graphs, EnumerationQuery};
use spinelab::gamma::presentation::rational_abelianization;
use spinelab::homology::{induced_map, HomologySummary};
use spinelab::verify::{run_suite, Suite, VerifyOptions};

use crate::args::{Coeff, DeltaArgs, EnumerateArgs, Global, HomologyArgs, StabMapArgs, VerifyArgs};

pub struct Outcome {
    pub records: Vec<Value>,
    pub cache_hits: usize,
    /// Some check in the output failed.
    pub failed: bool,
}

struct Context<'a> {
    global: &'a Global,
    cache_hits: usize,
}

impl Context<'_> {
    fn graphs(&mut self, q: &EnumerationQuery) -> Result<Vec<CanonicalGraph>> {
        let graphs = if self.global.no_cache {
            enumerate_graphs(q)?
        } else {
            let (graphs, hit) = EnumerationCache::from_env().get_or_enumerate(q)?;
            self.cache_hits += hit as usize;
            graphs
        };
        if graphs.len() > self.global.budget {
            return Err(spinelab::Error::Budget {
                what: "graphs",
                count: graphs.len(),
                limit: self.global.budget,
            }
            .into());
        }
        Ok(graphs)
    }

    fn spine(&mut self, n: usize, s: usize, options: SpineOptions) -> Result<SpineComplex> {
        let graphs = self.graphs(&spine_query(n, s, &options))?;
        let spine = spine_quotient_from_graphs(n, s, options, graphs)?;
        if !spine.complex().verify_dd_zero() {
            bail!("spine quotient for ({n}, {s}) fails the boundary check");
        }
        Ok(spine)
    }
}

pub fn enumerate(global: &Global, a: &EnumerateArgs) -> Result<Outcome> {
    let mut q = EnumerationQuery::new(a.rank, a.marks);
    if let Some(k) = a.degree_max {
        q = q.degree_max(k);
    }
    if a.require_basepoint_loop {
        q = q.require_basepoint_loop();
    }
    q.validate()?;
    let mut cx = Context { global, cache_hits: 0 };
    let graphs = cx.graphs(&q)?;
    let records = graphs
        .iter()
        .map(|c| {
            let g = c.graph();
            json!({
                "hex": c.hex(),
                "graph": g.to_json(),
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "degree": g.degree().ok(),
                "basepoint_loops": g.basepoint_loop_count(),
                "automorphisms": u64::try_from(c.automorphism_group_order()).unwrap_or(u64::MAX),
            })
        })
        .collect();
    Ok(Outcome {
        records,
        cache_hits: cx.cache_hits,
        failed: false,
    })
}

pub fn homology(global: &Global, a: &HomologyArgs) -> Result<Outcome> {
    let options = SpineOptions {
        restrict_to_l: a.restrict_l,
        degree_max: a.degree_max,
        max_dim: a.max_dim,
        budget: global.budget,
    };
    let mut cx = Context { global, cache_hits: 0 };
    let spine = cx.spine(a.rank, a.marks, options)?;
    let complex = spine.complex();
    let summary = match a.coeff {
        Coeff::Q => {
            let betti = complex.betti_q()?;
            HomologySummary::new(betti, vec![Vec::new(); complex.dims()], complex.euler_from_cells())
        }
        Coeff::Z => complex.homology_z()?,
    };
    let exact = spine.exact_through();
    let shown = exact.map_or(0, |d| d + 1).min(summary.betti.len());
    let unfiltered = !a.restrict_l && a.degree_max.is_none();
    let (bound, h1_check) = match exact {
        Some(d) if d >= 1 && unfiltered => {
            let bound = rational_abelianization(a.rank, a.marks).rational_rank_bound;
            let h1 = summary.betti[1];
            let ok = if bound == 0 { h1 == 0 } else { h1 <= bound };
            (Some(bound), if ok { "pass" } else { "fail" })
        }
        _ => (None, "not-applicable"),
    };
    let mut record = json!({
        "n": a.rank,
        "s": a.marks,
        "restrict_L": a.restrict_l,
        "degree_max": a.degree_max,
        "max_dim": a.max_dim,
        "coefficients": a.coeff,
        "cells": spine.cell_counts(),
        "complete": spine.is_complete(),
        "exact_through": exact,
        "betti": &summary.betti[..shown],
        "euler_cells": summary.euler_cells,
        "euler_betti": summary.euler_betti,
        "euler_consistent": summary.euler_consistent(),
        "abelianization_rank_bound": bound,
        "h1_check": h1_check,
    });
    if a.coeff == Coeff::Z {
        record["torsion"] = json!(summary
            .torsion
            .iter()
            .take(shown)
            .map(|t| t.iter().map(ToString::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>());
        record["space_level_only"] = json!(true);
    }
    Ok(Outcome {
        records: vec![record],
        cache_hits: cx.cache_hits,
        failed: h1_check == "fail" || !summary.euler_consistent(),
    })
}

/// What the stability range predicts for the map in degree `i`.
pub fn expected(kind: StabilizationKind, n: usize, s: usize, i: usize) -> Option<&'static str> {
    let (iso_from, surj_at) = match kind {
        StabilizationKind::Beta if s == 2 => (2 * i + 3, 2 * i + 2),
        _ => (2 * i + 2, 2 * i + 1),
    };
    if n >= iso_from {
        Some("isomorphism")
    } else if kind == StabilizationKind::Mu {
        Some("injection")
    } else if n == surj_at {
        Some("surjection")
    } else {
        None
    }
}

pub fn stab_map(global: &Global, a: &StabMapArgs) -> Result<Outcome> {
    let kind = StabilizationKind::from(a.map);
    let (tn, ts) = kind.target(a.rank, a.marks)?;
    let options = SpineOptions {
        max_dim: a.dim + 1,
        budget: global.budget,
        ..SpineOptions::default()
    };
    let mut cx = Context { global, cache_hits: 0 };
    let source = cx.spine(a.rank, a.marks, options)?;
    let target = cx.spine(tn, ts, options)?;
    let f = stabilization_chain_map(kind, &source, &target)?;
    let m = induced_map(&f, source.complex(), target.complex(), a.dim)?;
    let expect = expected(kind, a.rank, a.marks, a.dim);
    let holds = match expect {
        Some("isomorphism") => m.iso,
        Some("surjection") => m.surjective,
        Some("injection") => m.injective,
        _ => true,
    };
    let verdict = match (expect, holds) {
        (None, _) => "informational",
        (Some(_), true) => "pass",
        (Some(_), false) => "fail",
    };
    let label = if m.source_rank == 0 && m.target_rank == 0 {
        "vacuous"
    } else if expect.is_some() {
        "in-range"
    } else {
        "out-of-range"
    };
    let record = json!({
        "map": kind,
        "source": [a.rank, a.marks],
        "target": [tn, ts],
        "dim": a.dim,
        "chain_map_commutes": true,
        "source_rank": m.source_rank,
        "target_rank": m.target_rank,
        "matrix": m.matrix.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "rank": m.rank,
        "injective": m.injective,
        "surjective": m.surjective,
        "iso": m.iso,
        "expected": expect,
        "range": if expect.is_some() { "in-range" } else { "out-of-range" },
        "label": label,
        "verdict": verdict,
    });
    Ok(Outcome {
        records: vec![record],
        cache_hits: cx.cache_hits,
        failed: verdict == "fail",
    })
}

fn suite_outcome(suite: Suite, opts: &VerifyOptions) -> Result<Outcome> {
    let records = run_suite(suite, opts)?;
    let failed = records.iter().any(|r| r.failed());
    Ok(Outcome {
        records: records.iter().map(serde_json::to_value).collect::<Result<_, _>>()?,
        cache_hits: 0,
        failed,
    })
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let opts = VerifyOptions {
        samples: a.samples,
        seed: a.seed,
        ..VerifyOptions::default()
    };
    suite_outcome(a.suite.into(), &opts)
}

pub fn delta_check(a: &DeltaArgs) -> Result<Outcome> {
    let opts = VerifyOptions {
        delta_complexes: a.samples,
        seed: a.seed,
        ..VerifyOptions::default()
    };
    suite_outcome(Suite::Delta, &opts)
}
