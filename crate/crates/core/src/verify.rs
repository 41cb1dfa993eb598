//! Self-checks run by the `verify` command, reported as one record per check.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complexes::{
    check_semi_simplicial, delta_homology_check, pattern_quotient, spine_quotient, stabilization_chain_map,
    SimplicialComplex, SpineComplex, SpineOptions, StabilizationKind,
};
use crate::enumerate::verify_basepoint_loop_lemma;
use crate::error::{Error, Result};
use crate::gamma::{random_element, Filled};
use crate::homology::{induced_map, ChainMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma,
    Diagrams,
    Delta,
    Pattern,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Lemma, Suite::Diagrams, Suite::Delta, Suite::Pattern],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma => "lemma",
            Suite::Diagrams => "diagrams",
            Suite::Delta => "delta",
            Suite::Pattern => "pattern",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma" => Ok(Suite::Lemma),
            "diagrams" => Ok(Suite::Diagrams),
            "delta" => Ok(Suite::Delta),
            "pattern" => Ok(Suite::Pattern),
            "all" => Ok(Suite::All),
            _ => Err(Error::Invalid(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check does not apply to these parameters.
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub params: Value,
    pub status: Status,
    pub detail: Value,
}

impl CheckRecord {
    fn new(suite: Suite, check: &str, params: Value, passed: bool, detail: Value) -> Self {
        CheckRecord {
            suite: suite.name().to_string(),
            check: check.to_string(),
            params,
            status: if passed { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Random group elements per identity.
    pub samples: usize,
    pub seed: u64,
    pub lemma_n_max: usize,
    pub lemma_s_max: usize,
    /// Random simplicial complexes for the `Δ(Z)` comparison.
    pub delta_complexes: usize,
    pub pattern_n_max: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 1000,
            seed: 42,
            lemma_n_max: 5,
            lemma_s_max: 3,
            delta_complexes: 50,
            pattern_n_max: 5,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for s in suite.expand() {
        out.extend(match s {
            Suite::Lemma => lemma_suite(opts)?,
            Suite::Diagrams => diagram_suite(opts)?,
            Suite::Delta => delta_suite(opts)?,
            Suite::Pattern => pattern_suite(opts)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(out)
}

fn lemma_suite(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let report = verify_basepoint_loop_lemma(opts.lemma_n_max, opts.lemma_s_max)?;
    let mut out: Vec<CheckRecord> = report
        .cases
        .iter()
        .map(|c| {
            CheckRecord::new(
                Suite::Lemma,
                "low_degree_has_basepoint_loop",
                json!({ "n": c.n, "s": c.s }),
                c.violations.is_empty(),
                json!({ "graphs_checked": c.graphs_checked, "violations": c.violations }),
            )
        })
        .collect();
    out.extend(report.sharpness.iter().map(|w| {
        CheckRecord::new(
            Suite::Lemma,
            "sharpness_witness",
            json!({ "n": w.n }),
            w.witness.is_some(),
            json!({ "degree": w.degree, "witness": w.witness }),
        )
    }));
    Ok(out)
}

/// Parameters cycled through by the randomized identity checks.
const ALPHA_PARAMS: [(usize, usize); 6] = [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 3)];
const FILL_PARAMS: [usize; 4] = [1, 2, 3, 4];

/// Pairs where the chain maps are built and checked.
pub const CHAIN_MAP_PARAMS: [(usize, usize); 8] = [(1, 1), (2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (1, 2), (1, 3)];
/// Pairs where `β∘μ∘μ` and `α` are compared on `H_0` and `H_1`.
pub const COMPOSITE_PARAMS: [(usize, usize); 3] = [(1, 1), (1, 2), (2, 1)];

fn diagram_suite(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let first_failure = |check: &(dyn Fn(u64) -> bool + Sync)| {
        (0..opts.samples as u64)
            .into_par_iter()
            .find_first(|&k| !check(opts.seed.wrapping_add(k)))
            .map(|k| opts.seed.wrapping_add(k))
    };

    for (n, s) in ALPHA_PARAMS {
        let fail = first_failure(&|seed| {
            let g = random_element(n, s, 8, seed);
            let lhs = g.alpha().unwrap();
            let rhs = g.mu().and_then(|x| x.mu()).and_then(|x| x.beta()).unwrap();
            lhs == rhs
        });
        out.push(CheckRecord::new(
            Suite::Diagrams,
            "alpha_eq_beta_mu_mu",
            json!({ "n": n, "s": s, "samples": opts.samples, "seed": opts.seed }),
            fail.is_none(),
            json!({ "failing_seed": fail }),
        ));
    }
    for n in FILL_PARAMS {
        let fail = first_failure(&|seed| {
            let g = random_element(n, 1, 8, seed);
            let lhs = g.alpha().and_then(|x| x.gamma_fill()).unwrap();
            let rhs = g.mu().and_then(|x| x.beta()).unwrap();
            lhs == Filled::Outer(rhs.outer_class())
        });
        out.push(CheckRecord::new(
            Suite::Diagrams,
            "gamma_alpha_eq_beta_mu",
            json!({ "n": n, "s": 1, "samples": opts.samples, "seed": opts.seed }),
            fail.is_none(),
            json!({ "failing_seed": fail }),
        ));
    }

    let spine = |n: usize, s: usize| spine_quotient(n, s, SpineOptions::default().max_dim(2));
    for (n, s) in CHAIN_MAP_PARAMS {
        let source = spine(n, s)?;
        for kind in StabilizationKind::ALL {
            let params = json!({ "map": kind, "n": n, "s": s });
            let Ok((tn, ts)) = kind.target(n, s) else {
                out.push(CheckRecord {
                    suite: Suite::Diagrams.name().into(),
                    check: "chain_map_commutes".into(),
                    params,
                    status: Status::Skip,
                    detail: json!({ "reason": format!("{kind} needs more distinguished points") }),
                });
                continue;
            };
            let target = spine(tn, ts)?;
            let (passed, detail) = match stabilization_chain_map(kind, &source, &target) {
                Ok(f) => {
                    let h0 = induced_map(&f, source.complex(), target.complex(), 0)?;
                    (h0.is_identity(), json!({ "h0_identity": h0.is_identity() }))
                }
                Err(e) => (false, json!({ "error": e.to_string() })),
            };
            out.push(CheckRecord::new(Suite::Diagrams, "chain_map_commutes", params, passed, detail));
        }
    }
    for (n, s) in COMPOSITE_PARAMS {
        let (passed, detail) = composite_agrees(n, s)?;
        out.push(CheckRecord::new(
            Suite::Diagrams,
            "composite_matches_alpha_on_homology",
            json!({ "n": n, "s": s }),
            passed,
            detail,
        ));
    }
    Ok(out)
}

/// Compares `β∘μ∘μ` with `α` on `H_0` and `H_1` in the spine quotients.
pub fn composite_agrees(n: usize, s: usize) -> Result<(bool, Value)> {
    let opts = SpineOptions::default().max_dim(2);
    let c: Vec<SpineComplex> = [(n, s), (n, s + 1), (n, s + 2), (n + 1, s)]
        .par_iter()
        .map(|&(a, b)| spine_quotient(a, b, opts))
        .collect::<Result<_>>()?;
    let mu1 = stabilization_chain_map(StabilizationKind::Mu, &c[0], &c[1])?;
    let mu2 = stabilization_chain_map(StabilizationKind::Mu, &c[1], &c[2])?;
    let beta = stabilization_chain_map(StabilizationKind::Beta, &c[2], &c[3])?;
    let alpha = stabilization_chain_map(StabilizationKind::Alpha, &c[0], &c[3])?;
    let composite: ChainMap = beta.compose(&mu2.compose(&mu1)?)?;
    let mut detail = Vec::new();
    let mut passed = true;
    for d in 0..=1 {
        let a = induced_map(&alpha, c[0].complex(), c[3].complex(), d)?;
        let b = induced_map(&composite, c[0].complex(), c[3].complex(), d)?;
        let same = a.matrix == b.matrix;
        passed &= same;
        detail.push(json!({ "dim": d, "equal": same, "alpha_rank": a.rank, "composite_rank": b.rank }));
    }
    Ok((passed, json!(detail)))
}

fn delta_suite(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let mut named = vec![
        ("point", SimplicialComplex::point(), 3),
        ("two_points", SimplicialComplex::discrete(2), 3),
        ("triangle_boundary", SimplicialComplex::simplex_boundary(2), 3),
        ("tetrahedron_boundary", SimplicialComplex::simplex_boundary(3), 3),
        ("projective_plane", SimplicialComplex::projective_plane(), 3),
    ];
    for k in 0..opts.delta_complexes {
        let seed = opts.seed.wrapping_add(k as u64);
        let vertices = 1 + (seed % 8) as usize;
        let facets = 1 + (seed / 8 % 6) as usize;
        named.push(("random", SimplicialComplex::random(vertices, 3, facets, seed), 3));
    }
    named
        .into_par_iter()
        .enumerate()
        .map(|(i, (name, z, d))| {
            let r = delta_homology_check(&z, d)?;
            Ok(CheckRecord::new(
                Suite::Delta,
                "delta_matches_simplicial",
                json!({ "complex": name, "index": i, "facets": z.facets(), "max_check_dim": d }),
                r.passed(),
                json!({
                    "mismatch": r.mismatch,
                    "betti": r.delta.betti[..=d.min(r.delta.betti.len() - 1)],
                    "delta_cells": r.delta_cells,
                }),
            ))
        })
        .collect()
}

fn pattern_suite(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let identities = check_semi_simplicial(opts.pattern_n_max.max(1), 5);
    out.push(CheckRecord::new(
        Suite::Pattern,
        "semi_simplicial_identities",
        json!({ "n": opts.pattern_n_max.max(1), "max_dim": 5 }),
        identities.is_ok(),
        match identities {
            Ok(k) => json!({ "checked": k }),
            Err((cell, i, j)) => json!({ "cell": cell, "i": i, "j": j }),
        },
    ));
    for n in 1..=opts.pattern_n_max {
        let c = pattern_quotient(n, n + 1);
        let dd = c.verify_dd_zero();
        let h = c.homology_z()?;
        let reduced = h.reduced_betti();
        let vanishing = reduced[..n].iter().all(|&b| b == 0);
        out.push(CheckRecord::new(
            Suite::Pattern,
            "reduced_betti_vanish_below_n",
            json!({ "n": n, "max_dim": n + 1 }),
            dd && vanishing,
            json!({ "cells": c.cell_counts(), "reduced_betti": &reduced[..n], "dd_zero": dd }),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!("all".parse::<Suite>().unwrap().expand().len(), 4);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_pass() {
        let opts = VerifyOptions {
            samples: 20,
            delta_complexes: 5,
            lemma_n_max: 3,
            lemma_s_max: 2,
            pattern_n_max: 3,
            ..VerifyOptions::default()
        };
        for suite in [Suite::Lemma, Suite::Delta, Suite::Pattern] {
            let r = run_suite(suite, &opts).unwrap();
            assert!(!r.is_empty());
            assert!(r.iter().all(|c| !c.failed()), "{suite}: {r:?}");
        }
    }
}
