use crate::error::GammaError;

use super::word::Word;

/// An automorphism of the free group of rank `n`, stored with the images of
/// the generators under it and under its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeAutomorphism {
    n: usize,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

impl FreeAutomorphism {
    /// Checks that both composites fix every generator.
    pub fn new(n: usize, images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Self, GammaError> {
        for list in [&images, &inverse_images] {
            if list.len() != n {
                return Err(GammaError::WrongLength {
                    expected: n,
                    got: list.len(),
                });
            }
            for w in list {
                w.check_rank(n)?;
            }
        }
        let phi = FreeAutomorphism {
            n,
            images,
            inverse_images,
        };
        for j in 1..=n {
            let x = Word::generator(j);
            if phi.apply(&phi.apply_inverse(&x)) != x || phi.apply_inverse(&phi.apply(&x)) != x {
                return Err(GammaError::NotInverse);
            }
        }
        Ok(phi)
    }

    pub fn identity(n: usize) -> Self {
        let images: Vec<Word> = (1..=n).map(Word::generator).collect();
        FreeAutomorphism {
            n,
            images: images.clone(),
            inverse_images: images,
        }
    }

    /// Exchanges `x_i` and `x_j` (1-based).
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut phi = Self::identity(n);
        phi.images.swap(i - 1, j - 1);
        phi.inverse_images.swap(i - 1, j - 1);
        phi
    }

    /// `x_i -> x_i^{-1}`.
    pub fn invert(n: usize, i: usize) -> Self {
        let mut phi = Self::identity(n);
        phi.images[i - 1] = Word::generator(i).inverse();
        phi.inverse_images[i - 1] = Word::generator(i).inverse();
        phi
    }

    /// `x_i -> x_i x_j^e` for `e = ±1`.
    pub fn right_transvection(n: usize, i: usize, j: usize, e: i32) -> Self {
        assert!(i != j && (e == 1 || e == -1));
        let mut phi = Self::identity(n);
        phi.images[i - 1] = Word::new([i as i32, e * j as i32]);
        phi.inverse_images[i - 1] = Word::new([i as i32, -e * j as i32]);
        phi
    }

    /// `x_i -> x_j^e x_i` for `e = ±1`.
    pub fn left_transvection(n: usize, i: usize, j: usize, e: i32) -> Self {
        assert!(i != j && (e == 1 || e == -1));
        let mut phi = Self::identity(n);
        phi.images[i - 1] = Word::new([e * j as i32, i as i32]);
        phi.inverse_images[i - 1] = Word::new([-e * j as i32, i as i32]);
        phi
    }

    /// Inner automorphism `x -> w x w^{-1}`.
    pub fn conjugation(n: usize, w: &Word) -> Self {
        let winv = w.inverse();
        let images = (1..=n)
            .map(|j| &(w * &Word::generator(j)) * &winv)
            .collect();
        let inverse_images = (1..=n)
            .map(|j| &(&winv * &Word::generator(j)) * w)
            .collect();
        FreeAutomorphism {
            n,
            images,
            inverse_images,
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    pub fn apply(&self, w: &Word) -> Word {
        substitute(&self.images, w)
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        substitute(&self.inverse_images, w)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FreeAutomorphism) -> FreeAutomorphism {
        assert_eq!(self.n, other.n, "rank mismatch");
        FreeAutomorphism {
            n: self.n,
            images: other.images.iter().map(|w| self.apply(w)).collect(),
            inverse_images: self
                .inverse_images
                .iter()
                .map(|w| other.apply_inverse(w))
                .collect(),
        }
    }

    pub fn inverse(&self) -> FreeAutomorphism {
        FreeAutomorphism {
            n: self.n,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(j, w)| *w == Word::generator(j + 1))
    }

    /// Extends to rank `n + 1` fixing the new generator.
    pub fn extend(&self) -> FreeAutomorphism {
        let x = Word::generator(self.n + 1);
        let mut images = self.images.clone();
        let mut inverse_images = self.inverse_images.clone();
        images.push(x.clone());
        inverse_images.push(x);
        FreeAutomorphism {
            n: self.n + 1,
            images,
            inverse_images,
        }
    }

    /// Extends to rank `n + 1` with `x_{n+1} -> left · x_{n+1} · right^{-1}`.
    pub fn extend_with_conjugator(&self, left: &Word, right: &Word) -> FreeAutomorphism {
        let x = Word::generator(self.n + 1);
        let mut images = self.images.clone();
        let mut inverse_images = self.inverse_images.clone();
        images.push(&(left * &x) * &right.inverse());
        let pre = self.apply_inverse(&left.inverse());
        let post = self.apply_inverse(right);
        inverse_images.push(&(&pre * &x) * &post);
        FreeAutomorphism {
            n: self.n + 1,
            images,
            inverse_images,
        }
    }
}

fn substitute(images: &[Word], w: &Word) -> Word {
    let mut letters = Vec::new();
    for &x in w.letters() {
        let img = &images[x.unsigned_abs() as usize - 1];
        if x > 0 {
            letters.extend_from_slice(img.letters());
        } else {
            letters.extend(img.letters().iter().rev().map(|&y| -y));
        }
    }
    Word::new(letters)
}

/// Decides whether `phi` is inner. On success returns `g` with
/// `phi(x_j) = g x_j g^{-1}` for every `j`.
///
/// `phi(x_1)` must be a conjugate `h x_1 h^{-1}`, with `h` read off the
/// reduced word; the centraliser of `x_1` is `<x_1>`, so every witness is
/// `h x_1^k`. When `n >= 2` the exponent `k` is forced by `phi(x_2)`; every
/// candidate is verified against all generators.
pub fn is_inner(phi: &FreeAutomorphism) -> Option<Word> {
    let n = phi.rank();
    if n == 0 {
        return Some(Word::identity());
    }
    let x1 = Word::generator(1);
    let h = conjugator_of_generator(&phi.images()[0], 1)?;
    let witness = if n == 1 {
        h
    } else {
        let u = &(&h.inverse() * &phi.images()[1]) * &h;
        let k = leading_power(&u, 1);
        &h * &x1.pow(k)
    };
    let inner = FreeAutomorphism::conjugation(n, &witness);
    (inner.images() == phi.images()).then_some(witness)
}

/// If `w = h x_j h^{-1}` as reduced words, returns `h`.
fn conjugator_of_generator(w: &Word, j: usize) -> Option<Word> {
    let l = w.letters();
    if l.len() % 2 == 0 {
        return None;
    }
    let mid = l.len() / 2;
    if l[mid] != j as i32 {
        return None;
    }
    for i in 0..mid {
        if l[i] != -l[l.len() - 1 - i] {
            return None;
        }
    }
    Some(Word::new(l[..mid].iter().copied()))
}

/// Signed count of leading `x_j^{±1}` letters of `w`.
fn leading_power(w: &Word, j: usize) -> i64 {
    let l = w.letters();
    let Some(&first) = l.first() else { return 0 };
    if first.unsigned_abs() as usize != j {
        return 0;
    }
    l.iter().take_while(|&&x| x == first).count() as i64 * first.signum() as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_order() {
        let n = 2;
        let a = FreeAutomorphism::right_transvection(n, 1, 2, 1);
        let b = FreeAutomorphism::swap(n, 1, 2);
        let ab = a.compose(&b);
        // b first: x1 -> x2 -> x2
        assert_eq!(ab.apply(&Word::generator(1)), Word::generator(2));
        // x2 -> x1 -> x1 x2
        assert_eq!(ab.apply(&Word::generator(2)), Word::new([1, 2]));
        assert!(ab.compose(&ab.inverse()).is_identity());
        assert!(FreeAutomorphism::new(n, ab.images().to_vec(), ab.inverse_images().to_vec()).is_ok());
    }

    #[test]
    fn new_rejects_non_inverse() {
        let x = Word::generator(1);
        let y = Word::generator(2);
        let r = FreeAutomorphism::new(2, vec![&x * &y, y.clone()], vec![x, y]);
        assert_eq!(r.unwrap_err(), GammaError::NotInverse);
    }

    #[test]
    fn inner_examples() {
        let w = Word::new([1, 2]);
        let phi = FreeAutomorphism::conjugation(3, &w);
        assert_eq!(is_inner(&phi), Some(w));
        assert_eq!(is_inner(&FreeAutomorphism::identity(3)), Some(Word::identity()));
        assert_eq!(is_inner(&FreeAutomorphism::invert(2, 1)), None);
        assert_eq!(is_inner(&FreeAutomorphism::invert(1, 1)), None);
        // conjugation by a power of x_1 in rank one is the identity
        assert_eq!(
            is_inner(&FreeAutomorphism::conjugation(1, &Word::new([1, 1]))),
            Some(Word::identity())
        );
        let w = Word::new([1, 1, 2, -1]);
        assert_eq!(is_inner(&FreeAutomorphism::conjugation(2, &w)), Some(w));
    }

    #[test]
    fn extension_with_conjugator_is_invertible() {
        let phi = FreeAutomorphism::right_transvection(2, 1, 2, -1);
        let ext = phi.extend_with_conjugator(&Word::new([1, 2]), &Word::new([-2]));
        let checked = FreeAutomorphism::new(3, ext.images().to_vec(), ext.inverse_images().to_vec());
        assert!(checked.is_ok());
    }
}
