use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GammaError;

use super::automorphism::{is_inner, FreeAutomorphism};
use super::word::Word;

/// An element of `Γ_{n,s}` in the homotopy-equivalence model: an automorphism
/// of `F_n` together with one word per thorn (`s - 1` of them). For `s = 0`
/// the element stands for its outer class.
///
/// Composition is `(φ, w) ∘ (ψ, u) = (φ ∘ ψ, φ(u_i) · w_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaElement {
    n: usize,
    s: usize,
    phi: FreeAutomorphism,
    thorns: Vec<Word>,
}

/// Result of filling in a boundary sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filled {
    Element(GammaElement),
    Outer(OuterClass),
}

/// An element of `Out(F_n)`; equality is up to inner automorphisms.
#[derive(Debug, Clone)]
pub struct OuterClass {
    representative: FreeAutomorphism,
}

impl OuterClass {
    pub fn new(representative: FreeAutomorphism) -> Self {
        OuterClass { representative }
    }

    pub fn representative(&self) -> &FreeAutomorphism {
        &self.representative
    }
}

impl PartialEq for OuterClass {
    fn eq(&self, other: &Self) -> bool {
        self.representative.rank() == other.representative.rank()
            && is_inner(&self.representative.compose(&other.representative.inverse())).is_some()
    }
}

impl Eq for OuterClass {}

fn thorn_count(s: usize) -> usize {
    s.saturating_sub(1)
}

impl GammaElement {
    pub fn new(n: usize, s: usize, phi: FreeAutomorphism, thorns: Vec<Word>) -> Result<Self, GammaError> {
        if n == 0 {
            return Err(GammaError::ZeroRank);
        }
        if phi.rank() != n {
            return Err(GammaError::ParameterMismatch(n, s, phi.rank(), s));
        }
        if thorns.len() != thorn_count(s) {
            return Err(GammaError::WrongLength {
                expected: thorn_count(s),
                got: thorns.len(),
            });
        }
        for w in &thorns {
            w.check_rank(n)?;
        }
        Ok(GammaElement { n, s, phi, thorns })
    }

    pub fn identity(n: usize, s: usize) -> Self {
        GammaElement {
            n,
            s,
            phi: FreeAutomorphism::identity(n),
            thorns: vec![Word::identity(); thorn_count(s)],
        }
    }

    pub fn from_automorphism(s: usize, phi: FreeAutomorphism) -> Self {
        GammaElement {
            n: phi.rank(),
            s,
            phi,
            thorns: vec![Word::identity(); thorn_count(s)],
        }
    }

    /// `(id, 1, ..., w, ..., 1)` with `w` in thorn slot `k` (0-based).
    pub fn thorn_generator(n: usize, s: usize, k: usize, w: Word) -> Self {
        let mut g = Self::identity(n, s);
        g.thorns[k] = w;
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn phi(&self) -> &FreeAutomorphism {
        &self.phi
    }

    pub fn thorns(&self) -> &[Word] {
        &self.thorns
    }

    pub fn is_identity(&self) -> bool {
        self.phi.is_identity() && self.thorns.iter().all(Word::is_identity)
    }

    fn check_same(&self, other: &GammaElement) -> Result<(), GammaError> {
        if (self.n, self.s) != (other.n, other.s) {
            return Err(GammaError::ParameterMismatch(self.n, self.s, other.n, other.s));
        }
        Ok(())
    }

    pub fn compose(&self, other: &GammaElement) -> Result<GammaElement, GammaError> {
        self.check_same(other)?;
        let thorns = other
            .thorns
            .iter()
            .zip(&self.thorns)
            .map(|(u, w)| &self.phi.apply(u) * w)
            .collect();
        Ok(GammaElement {
            n: self.n,
            s: self.s,
            phi: self.phi.compose(&other.phi),
            thorns,
        })
    }

    pub fn inverse(&self) -> GammaElement {
        let inv = self.phi.inverse();
        let thorns = self
            .thorns
            .iter()
            .map(|w| inv.apply(&w.inverse()))
            .collect();
        GammaElement {
            n: self.n,
            s: self.s,
            phi: inv,
            thorns,
        }
    }

    fn need(&self, needed: usize) -> Result<(), GammaError> {
        if self.s < needed {
            return Err(GammaError::TooFewBoundaries {
                needed,
                got: self.s,
            });
        }
        Ok(())
    }

    /// Adding a punctured handle: `Γ_{n,s} -> Γ_{n+1,s}`.
    pub fn alpha(&self) -> Result<GammaElement, GammaError> {
        self.need(1)?;
        Ok(GammaElement {
            n: self.n + 1,
            s: self.s,
            phi: self.phi.extend(),
            thorns: self.thorns.clone(),
        })
    }

    /// Adding pants: `Γ_{n,s} -> Γ_{n,s+1}`, with a trivial new last thorn.
    pub fn mu(&self) -> Result<GammaElement, GammaError> {
        self.need(1)?;
        let mut thorns = self.thorns.clone();
        thorns.push(Word::identity());
        Ok(GammaElement {
            n: self.n,
            s: self.s + 1,
            phi: self.phi.clone(),
            thorns,
        })
    }

    /// Adding a tube between the last two boundary spheres:
    /// `Γ_{n,s} -> Γ_{n+1,s-2}`, with `x_{n+1} -> w_{s-2} x_{n+1} w_{s-1}^{-1}`
    /// where `w_0` (the basepoint) is trivial.
    pub fn beta(&self) -> Result<GammaElement, GammaError> {
        self.need(2)?;
        let last = &self.thorns[self.s - 2];
        let second = if self.s == 2 {
            Word::identity()
        } else {
            self.thorns[self.s - 3].clone()
        };
        Ok(GammaElement {
            n: self.n + 1,
            s: self.s - 2,
            phi: self.phi.extend_with_conjugator(&second, last),
            thorns: self.thorns[..self.s.saturating_sub(3)].to_vec(),
        })
    }

    /// Filling in a boundary sphere. For `s >= 2` the last thorn is dropped;
    /// for `s = 1` the result is the outer class of `φ`.
    pub fn gamma_fill(&self) -> Result<Filled, GammaError> {
        self.need(1)?;
        if self.s == 1 {
            return Ok(Filled::Outer(OuterClass::new(self.phi.clone())));
        }
        Ok(Filled::Element(self.forget_last()?))
    }

    /// The map `G_{n,s} -> G_{n,s-1}` forgetting the last thorn.
    pub fn forget_last(&self) -> Result<GammaElement, GammaError> {
        self.need(2)?;
        let mut thorns = self.thorns.clone();
        thorns.pop();
        Ok(GammaElement {
            n: self.n,
            s: self.s - 1,
            phi: self.phi.clone(),
            thorns,
        })
    }

    /// The `F_n` coordinate of a kernel element of [`Self::forget_last`].
    pub fn kernel_project(&self) -> Option<Word> {
        if self.s < 2 {
            return None;
        }
        let rest = &self.thorns[..self.thorns.len() - 1];
        (self.phi.is_identity() && rest.iter().all(Word::is_identity))
            .then(|| self.thorns.last().unwrap().clone())
    }

    pub fn outer_class(&self) -> OuterClass {
        OuterClass::new(self.phi.clone())
    }

    /// Equality in `Γ_{n,s}`; for `s = 0` this is equality of outer classes.
    pub fn equals(&self, other: &GammaElement) -> bool {
        if (self.n, self.s) != (other.n, other.s) {
            return false;
        }
        if self.s == 0 {
            self.outer_class() == other.outer_class()
        } else {
            self == other
        }
    }

    pub fn to_json(&self) -> ElementJson {
        let show = |ws: &[Word]| ws.iter().map(Word::to_string).collect();
        ElementJson {
            n: self.n,
            s: self.s,
            phi: show(self.phi.images()),
            phi_inv: show(self.phi.inverse_images()),
            thorns: show(&self.thorns),
        }
    }

    pub fn from_json(j: &ElementJson) -> Result<Self, GammaError> {
        let parse = |ws: &[String]| ws.iter().map(|w| Word::parse(w)).collect::<Result<Vec<_>, _>>();
        let phi = FreeAutomorphism::new(j.n, parse(&j.phi)?, parse(&j.phi_inv)?)?;
        GammaElement::new(j.n, j.s, phi, parse(&j.thorns)?)
    }
}

/// Wire form of an element: words over `a..z`, capitals for inverses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub n: usize,
    pub s: usize,
    pub phi: Vec<String>,
    pub phi_inv: Vec<String>,
    pub thorns: Vec<String>,
}

/// Nielsen generators of `Aut(F_n)`: swaps, inversions and the four kinds of
/// transvection.
pub fn nielsen_generators(n: usize) -> Vec<FreeAutomorphism> {
    let mut gens = Vec::new();
    for i in 1..=n {
        gens.push(FreeAutomorphism::invert(n, i));
        for j in 1..=n {
            if i == j {
                continue;
            }
            if i < j {
                gens.push(FreeAutomorphism::swap(n, i, j));
            }
            for e in [1, -1] {
                gens.push(FreeAutomorphism::right_transvection(n, i, j, e));
                gens.push(FreeAutomorphism::left_transvection(n, i, j, e));
            }
        }
    }
    gens
}

/// A reproducible random element: `φ` is a product of up to `max_len` Nielsen
/// generators and each thorn word has length at most `max_len`.
pub fn random_element(n: usize, s: usize, max_len: usize, seed: u64) -> GammaElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = nielsen_generators(n);
    let mut phi = FreeAutomorphism::identity(n);
    let factors = rng.gen_range(0..=max_len);
    for _ in 0..factors {
        phi = phi.compose(&gens[rng.gen_range(0..gens.len())]);
    }
    let thorns = (0..thorn_count(s))
        .map(|_| random_word(&mut rng, n, max_len))
        .collect();
    GammaElement { n, s, phi, thorns }
}

fn random_word(rng: &mut impl Rng, n: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    while letters.len() < len {
        let x = rng.gen_range(1..=n as i32) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if letters.last() != Some(&-x) {
            letters.push(x);
        }
    }
    Word::new(letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_laws() {
        let a = random_element(3, 3, 6, 7);
        let id = GammaElement::identity(3, 3);
        assert_eq!(a.compose(&id).unwrap(), a);
        assert_eq!(id.compose(&a).unwrap(), a);
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
        assert!(a.inverse().compose(&a).unwrap().is_identity());
    }

    #[test]
    fn compose_rejects_mismatch() {
        let a = GammaElement::identity(2, 2);
        let b = GammaElement::identity(2, 3);
        assert!(matches!(a.compose(&b), Err(GammaError::ParameterMismatch(..))));
    }

    #[test]
    fn thorn_words_under_trivial_automorphism() {
        let w = Word::parse("ab").unwrap();
        let u = Word::parse("Ba").unwrap();
        let a = GammaElement::thorn_generator(2, 2, 0, w.clone());
        let b = GammaElement::thorn_generator(2, 2, 0, u.clone());
        assert_eq!(a.compose(&b).unwrap().thorns()[0], &u * &w);
    }

    #[test]
    fn stabilization_domains() {
        let g = GammaElement::identity(2, 0);
        assert!(g.alpha().is_err());
        assert!(g.mu().is_err());
        assert!(GammaElement::identity(2, 1).beta().is_err());
        assert!(g.gamma_fill().is_err());
        assert!(GammaElement::identity(2, 1).alpha().unwrap().is_identity());
        assert!(GammaElement::identity(2, 1).mu().unwrap().is_identity());
        let b = GammaElement::identity(2, 2).beta().unwrap();
        assert_eq!((b.n(), b.s()), (3, 0));
        assert!(b.is_identity());
    }

    #[test]
    fn mu_appends_one_thorn() {
        let g = random_element(2, 3, 5, 1);
        assert_eq!(g.mu().unwrap().thorns().len(), g.thorns().len() + 1);
    }

    #[test]
    fn stabilization_identities_on_a_few_samples() {
        for seed in 0..50 {
            let g = random_element(3, 2, 8, seed);
            assert_eq!(g.mu().unwrap().mu().unwrap().beta().unwrap(), g.alpha().unwrap());
            assert_eq!(g.mu().unwrap().gamma_fill().unwrap(), Filled::Element(g.clone()));
            let h = random_element(3, 1, 8, seed);
            let lhs = h.alpha().unwrap().gamma_fill().unwrap();
            let rhs = h.mu().unwrap().beta().unwrap();
            assert_eq!(lhs, Filled::Outer(rhs.outer_class()));
        }
    }

    #[test]
    fn outer_equality_ignores_conjugation() {
        let phi = random_element(3, 1, 6, 3).phi().clone();
        let c = FreeAutomorphism::conjugation(3, &Word::parse("abC").unwrap());
        let a = GammaElement::from_automorphism(1, phi.clone());
        let b = GammaElement::from_automorphism(1, c.compose(&phi));
        assert_ne!(a, b);
        assert_eq!(a.gamma_fill().unwrap(), b.gamma_fill().unwrap());
    }

    #[test]
    fn kernel_projection() {
        let w = Word::parse("abA").unwrap();
        let u = Word::parse("bb").unwrap();
        let kw = GammaElement::thorn_generator(2, 3, 1, w.clone());
        let ku = GammaElement::thorn_generator(2, 3, 1, u.clone());
        assert_eq!(kw.kernel_project(), Some(w.clone()));
        assert_eq!(kw.compose(&ku).unwrap().kernel_project(), Some(&u * &w));
        let g = GammaElement::from_automorphism(3, FreeAutomorphism::invert(2, 1));
        assert_eq!(g.kernel_project(), None);
    }

    #[test]
    fn random_is_reproducible() {
        let a = random_element(4, 3, 8, 99);
        assert_eq!(a, random_element(4, 3, 8, 99));
        let phi = a.phi();
        assert!(FreeAutomorphism::new(4, phi.images().to_vec(), phi.inverse_images().to_vec()).is_ok());
        assert!(a.thorns().iter().all(|w| w.len() <= 8));
    }

    #[test]
    fn json_roundtrip() {
        let a = random_element(3, 3, 6, 5);
        let j = a.to_json();
        assert_eq!(GammaElement::from_json(&j).unwrap(), a);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"phi_inv\""));
    }
}
