//! Quantum integers and Gaussian binomial coefficients as integer Laurent
//! polynomials in `q`, with specialization at `q = -1` and `q = 1`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A finite sum `Σ c_e q^e` with `e ∈ ℤ` and `c_e ∈ ℤ`.
///
/// Stored densely from the lowest exponent; both end coefficients are nonzero,
/// and the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

/// How a polynomial is specialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QMode {
    GenericQ,
    MinusOne,
}

/// Result of [`eval`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluated {
    Int(BigInt),
    Poly(LaurentPoly),
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(BigInt::one(), 0)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        LaurentPoly::monomial(c.into(), 0)
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        LaurentPoly::monomial(BigInt::one(), e)
    }

    pub fn monomial(c: BigInt, e: i64) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { low: e, coeffs: vec![c] }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().collect();
        let Some(low) = terms.iter().map(|t| t.0).min() else {
            return LaurentPoly::zero();
        };
        let high = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - low) as usize] += c;
        }
        LaurentPoly::normalized(low, coeffs)
    }

    fn normalized(mut low: i64, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return LaurentPoly::zero();
        }
        coeffs.drain(..lead);
        low += lead as i64;
        LaurentPoly { low, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient, `None` for zero.
    pub fn low_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        if e < self.low {
            return BigInt::zero();
        }
        self.coeffs.get((e - self.low) as usize).cloned().unwrap_or_default()
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Value at `q = -1`.
    pub fn eval_minus_one(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in self.terms() {
            if e.rem_euclid(2) == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }

    /// Value at `q = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// True if every coefficient has absolute value at most `bound`.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// `(low, dense coefficients)` view used by the exact solver.
    pub(crate) fn dense(&self) -> (i64, &[BigInt]) {
        (self.low, &self.coeffs)
    }

    pub(crate) fn from_dense(low: i64, coeffs: Vec<BigInt>) -> Self {
        LaurentPoly::normalized(low, coeffs)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high_degree().unwrap().max(rhs.high_degree().unwrap());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.low - low) as usize + i] += c;
        }
        LaurentPoly::normalized(low, coeffs)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self + rhs;
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::normalized(self.low + rhs.low, coeffs)
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            match e {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "q")?,
                1 => write!(f, "{abs}q")?,
                _ if unit => write!(f, "q^{e}")?,
                _ => write!(f, "{abs}q^{e}")?,
            }
        }
        Ok(())
    }
}

/// `[m] = 1 + q + ... + q^{m-1}`; `[0] = 0`.
pub fn q_int(m: u64) -> LaurentPoly {
    LaurentPoly::from_dense(0, vec![BigInt::one(); m as usize])
}

/// `[m]! = [1][2]...[m]`.
pub fn q_factorial(m: u64) -> LaurentPoly {
    (1..=m).fold(LaurentPoly::one(), |acc, k| &acc * &q_int(k))
}

fn gauss_cache() -> &'static DashMap<(i64, i64), LaurentPoly> {
    static CACHE: OnceLock<DashMap<(i64, i64), LaurentPoly>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// Gaussian binomial `[m choose j]`, zero unless `0 <= j <= m`.
///
/// Built row by row from the recurrence `G(m,j) = G(m-1,j-1) + q^j G(m-1,j)`.
pub fn gauss_binom(m: i64, j: i64) -> LaurentPoly {
    if j < 0 || m < 0 || j > m {
        return LaurentPoly::zero();
    }
    if j == 0 || j == m {
        return LaurentPoly::one();
    }
    let j = j.min(m - j);
    if let Some(v) = gauss_cache().get(&(m, j)) {
        return v.clone();
    }
    let v = &gauss_binom(m - 1, j - 1) + &gauss_binom(m - 1, j).shift(j);
    gauss_cache().insert((m, j), v.clone());
    v
}

/// Gaussian binomial evaluated at `q = -1`, without building the polynomial.
///
/// Equals `C(m/2, j/2)` when `j` is even or `m` is odd (floors), else 0.
pub fn gauss_binom_minus_one(m: i64, j: i64) -> BigInt {
    if j < 0 || m < 0 || j > m {
        return BigInt::zero();
    }
    if m % 2 == 0 && j % 2 == 1 {
        return BigInt::zero();
    }
    binomial((m / 2) as u64, (j / 2) as u64)
}

/// Ordinary binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Specializes according to `mode`.
pub fn eval(p: &LaurentPoly, mode: QMode) -> Evaluated {
    match mode {
        QMode::GenericQ => Evaluated::Poly(p.clone()),
        QMode::MinusOne => Evaluated::Int(p.eval_minus_one()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn quantum_integers() {
        assert!(q_int(0).is_zero());
        assert_eq!(q_int(2).eval_minus_one(), BigInt::zero());
        for m in 0..20u64 {
            assert_eq!(q_int(m).eval_minus_one(), BigInt::from(m % 2));
        }
    }

    #[test]
    fn gaussian_values() {
        assert_eq!(gauss_binom(4, 2).eval_one(), BigInt::from(6));
        assert_eq!(gauss_binom(4, 2).eval_minus_one(), BigInt::from(2));
        assert_eq!(gauss_binom(3, 1), poly(&[(0, 1), (1, 1), (2, 1)]));
        assert_eq!(gauss_binom(4, 2), poly(&[(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)]));
        assert!(gauss_binom(3, 4).is_zero());
        assert!(gauss_binom(3, -1).is_zero());
    }

    #[test]
    fn closed_form_at_minus_one_matches() {
        for m in 0..25 {
            for j in -1..=m + 1 {
                assert_eq!(gauss_binom(m, j).eval_minus_one(), gauss_binom_minus_one(m, j), "({m},{j})");
            }
        }
    }

    #[test]
    fn factorial_quotient() {
        for m in 0..9u64 {
            for j in 0..=m {
                let lhs = &gauss_binom(m as i64, j as i64) * &(&q_factorial(j) * &q_factorial(m - j));
                assert_eq!(lhs, q_factorial(m));
            }
        }
    }

    #[test]
    fn evaluation() {
        assert_eq!(LaurentPoly::q_pow(-1).eval_minus_one(), BigInt::from(-1));
        assert_eq!(poly(&[(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)]).eval_minus_one(), BigInt::from(2));
        assert_eq!(eval(&LaurentPoly::one(), QMode::MinusOne), Evaluated::Int(BigInt::one()));
        assert_eq!(eval(&q_int(2), QMode::GenericQ), Evaluated::Poly(q_int(2)));
    }

    #[test]
    fn arithmetic() {
        let a = poly(&[(-2, 3), (1, -1)]);
        let b = poly(&[(2, 1), (0, 2)]);
        assert_eq!(&a - &a, LaurentPoly::zero());
        assert_eq!(&(&a * &b), &poly(&[(-2, 6), (0, 3), (1, -2), (3, -1)]));
        assert_eq!(a.to_string(), "3q^-2 - q");
        assert_eq!(a.shift(2).low_degree(), Some(0));
    }
}
