use std::fmt;
use std::ops::Mul;

use crate::error::GammaError;

/// A freely reduced word in `x_1, ..., x_n`. Letter `j > 0` is `x_j` and
/// `-j` its inverse.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(j: usize) -> Self {
        Word(vec![j as i32])
    }

    /// Freely reduces `letters`. Zero letters are dropped.
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for x in letters {
            if x == 0 {
                continue;
            }
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&x| -x).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// Largest generator index used, zero for the identity.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn check_rank(&self, n: usize) -> Result<(), GammaError> {
        match self.0.iter().find(|x| x.unsigned_abs() as usize > n) {
            Some(&x) => Err(GammaError::LetterOutOfRange(x, n)),
            None => Ok(()),
        }
    }

    /// Exponent sum of each generator.
    pub fn abelianize(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for &x in &self.0 {
            v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
        }
        v
    }

    /// Letters `a..z` for `x_1..x_26`, capitals for inverses; the empty
    /// string is the identity.
    pub fn parse(s: &str) -> Result<Word, GammaError> {
        let letters = s
            .chars()
            .map(|c| match c {
                'a'..='z' => Ok(c as i32 - 'a' as i32 + 1),
                'A'..='Z' => Ok(-(c as i32 - 'A' as i32 + 1)),
                _ => Err(GammaError::BadWord(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let w = Word::new(letters.iter().copied());
        if w.0 != letters {
            return Err(GammaError::BadWord(s.to_string()));
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            let c = (b'a' + (x.unsigned_abs() as u8 - 1)) as char;
            if x > 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{}", c.to_ascii_uppercase())?;
            }
        }
        Ok(())
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut out = self.0.clone();
        for &x in &rhs.0 {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        assert_eq!(Word::new([1, 2, -2, 1]).letters(), &[1, 1]);
        assert_eq!(Word::new([1, 2, -2, -1]), Word::identity());
        let w = Word::new([1, 2, 1, -2]);
        assert_eq!(&w * &w.inverse(), Word::identity());
        assert_eq!(w.pow(-1), w.inverse());
        assert_eq!(Word::new([1, 2]).pow(3).len(), 6);
    }

    #[test]
    fn parse_and_display() {
        let w = Word::parse("abA").unwrap();
        assert_eq!(w.letters(), &[1, 2, -1]);
        assert_eq!(w.to_string(), "abA");
        assert!(Word::parse("aA").is_err());
        assert!(Word::parse("a1").is_err());
        assert_eq!(Word::parse("").unwrap(), Word::identity());
    }
}
