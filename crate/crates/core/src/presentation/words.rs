use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A generator raised to `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: usize, exp: i8) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Self { gen, exp }
    }

    pub fn inverse(self) -> Self {
        Self {
            gen: self.gen,
            exp: -self.exp,
        }
    }
}

/// A word in the free group, stored letter by letter.
///
/// Construction through [`FreeWord::new`] keeps words freely reduced.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Freely reduces the given letters.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    /// Keeps the letters exactly as given, without reduction.
    pub fn unreduced(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn generator(gen: usize) -> Self {
        Self::new([Letter::new(gen, 1)])
    }

    /// `g^n` for any integer `n`.
    pub fn power_of(gen: usize, n: i64) -> Self {
        let exp = if n >= 0 { 1 } else { -1 };
        Self::new(std::iter::repeat_n(Letter::new(gen, exp), n.unsigned_abs() as usize))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn reduced(&self) -> Self {
        Self::new(self.letters.iter().copied())
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &FreeWord) -> Self {
        Self::new(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n >= 0 { self.clone() } else { self.inverse() };
        let mut out = Self::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Letters in reverse order, exponents unchanged.
    pub fn reversed(&self) -> Self {
        Self::new(self.letters.iter().rev().copied())
    }

    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| i64::from(l.exp))
            .sum()
    }

    pub fn total_exponent(&self) -> i64 {
        self.letters.iter().map(|l| i64::from(l.exp)).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    /// First `k` letters.
    pub fn prefix(&self, k: usize) -> Self {
        Self::unreduced(self.letters[..k].to_vec())
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Self {
        let n = self.letters.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Self::unreduced(letters)
    }

    /// `[x, y] = x y x^-1 y^-1`.
    pub fn commutator(x: &FreeWord, y: &FreeWord) -> Self {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    pub fn conjugate(&self, by: &FreeWord) -> Self {
        by.concat(self).concat(&by.inverse())
    }
}

impl Mul for &FreeWord {
    type Output = FreeWord;

    fn mul(self, rhs: &FreeWord) -> FreeWord {
        self.concat(rhs)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}", l.gen)?;
            if l.exp < 0 {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Integer combination of free-group words; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<FreeWord, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(FreeWord::identity())
    }

    pub fn from_word(w: FreeWord) -> Self {
        Self::from_term(w, 1)
    }

    pub fn from_term(w: FreeWord, coeff: i64) -> Self {
        let mut e = Self::zero();
        e.add_term(w, coeff);
        e
    }

    pub fn add_term(&mut self, w: FreeWord, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let w = w.reduced();
        let entry = self.terms.entry(w.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &FreeWord) -> i64 {
        self.terms.get(&w.reduced()).copied().unwrap_or(0)
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero();
        if k != 0 {
            for (w, &c) in &self.terms {
                out.add_term(w.clone(), c * k);
            }
        }
        out
    }

    /// `word * self`.
    pub fn left_mul(&self, word: &FreeWord) -> Self {
        let mut out = Self::zero();
        for (w, &c) in &self.terms {
            out.add_term(word.concat(w), c);
        }
        out
    }

    /// `self * word`.
    pub fn right_mul(&self, word: &FreeWord) -> Self {
        let mut out = Self::zero();
        for (w, &c) in &self.terms {
            out.add_term(w.concat(word), c);
        }
        out
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;

    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, &c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;

    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self + &(-rhs)
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;

    fn neg(self) -> GroupRingElement {
        self.scale(-1)
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;

    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (u, &a) in &self.terms {
            for (v, &b) in &rhs.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

/// Fox derivative `∂w/∂g`.
pub fn fox_derivative(w: &FreeWord, gen: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = FreeWord::identity();
    for &l in w.letters() {
        if l.gen == gen {
            if l.exp > 0 {
                out.add_term(prefix.clone(), 1);
            } else {
                out.add_term(prefix.concat(&FreeWord::new([l])), -1);
            }
        }
        prefix = prefix.concat(&FreeWord::new([l]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> FreeWord {
        FreeWord::generator(0)
    }

    fn b() -> FreeWord {
        FreeWord::generator(1)
    }

    #[test]
    fn reduction_and_inverse() {
        let w = FreeWord::new([
            Letter::new(0, 1),
            Letter::new(1, 1),
            Letter::new(1, -1),
            Letter::new(0, 1),
        ]);
        assert_eq!(w, a().pow(2));
        assert!(a().concat(&a().inverse()).is_empty());
        let ab = &a() * &b();
        assert_eq!(ab.inverse(), &b().inverse() * &a().inverse());
    }

    #[test]
    fn fox_basic_rules() {
        // ∂(g1 g2)/∂g1 = 1
        assert_eq!(fox_derivative(&(&a() * &b()), 0), GroupRingElement::one());
        // ∂(g^-1)/∂g = -g^-1
        assert_eq!(
            fox_derivative(&a().inverse(), 0),
            GroupRingElement::from_term(a().inverse(), -1)
        );
    }

    #[test]
    fn fox_of_commutator() {
        // ∂[μ,λ]/∂μ = 1 - μλμ^-1 when λ does not involve μ
        let mu = a();
        let lambda = &b() * &b();
        let c = FreeWord::commutator(&mu, &lambda);
        let mut expected = GroupRingElement::one();
        expected.add_term(mu.concat(&lambda).concat(&mu.inverse()), -1);
        assert_eq!(fox_derivative(&c, 0), expected);
    }

    #[test]
    fn group_ring_products() {
        let x = &GroupRingElement::from_word(a()) - &GroupRingElement::one();
        let y = &GroupRingElement::from_word(a().inverse()) + &GroupRingElement::one();
        let p = &x * &y;
        // (a - 1)(a^-1 + 1) = 1 + a - a^-1 - 1 = a - a^-1
        let mut expected = GroupRingElement::from_word(a());
        expected.add_term(a().inverse(), -1);
        assert_eq!(p, expected);
        assert_eq!(p.augmentation(), 0);
    }
}
