//! Rational functions in `q` over ℚ, used to solve the small linear systems that
//! arise when straightening relations form cycles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::qarith::LaurentPoly;

/// Dense polynomial over ℚ, ascending powers, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![BigRational::one()])
    }

    fn trimmed(mut v: Vec<BigRational>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        QPoly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| {
                let a = self.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                let b = other.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                a + b
            })
            .collect();
        QPoly::trimmed(v)
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::trimmed(v)
    }

    fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::trimmed(self.0.iter().map(|x| x * c).collect())
    }

    fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        if rem.len() < d.0.len() {
            return (QPoly::zero(), QPoly::trimmed(rem));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d.0.len() + 1];
        let lead = d.lead().clone();
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d.degree()] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.0.iter().enumerate() {
                rem[k + i] -= &c * di;
            }
            quot[k] = c;
        }
        (QPoly::trimmed(quot), QPoly::trimmed(rem))
    }

    fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = BigRational::one() / self.lead();
        self.scale(&inv)
    }

    fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: QPoly::zero(), den: QPoly::one() }
    }

    #[allow(dead_code)]
    pub fn one() -> Self {
        RatFunc { num: QPoly::one(), den: QPoly::one() }
    }

    fn new(num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let lead = den.lead().clone();
        let den = den.monic();
        num = num.scale(&(BigRational::one() / lead));
        RatFunc { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        if p.is_zero() {
            return RatFunc::zero();
        }
        let (low, coeffs) = p.dense();
        let num: Vec<BigRational> = coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let num = QPoly::trimmed(num);
        if low >= 0 {
            let mut shifted = vec![BigRational::zero(); low as usize];
            shifted.extend(num.0);
            RatFunc { num: QPoly(shifted), den: QPoly::one() }
        } else {
            let mut den = vec![BigRational::zero(); (-low) as usize];
            den.push(BigRational::one());
            RatFunc { num, den: QPoly(den) }
        }
    }

    /// Converts back when the value is an integral Laurent polynomial.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let den = &self.den.0;
        let k = den.len() - 1;
        if den[..k].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut coeffs: Vec<BigInt> = Vec::with_capacity(self.num.0.len());
        for c in &self.num.0 {
            if !c.is_integer() {
                return None;
            }
            coeffs.push(c.to_integer());
        }
        Some(LaurentPoly::from_dense(-(k as i64), coeffs))
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    #[allow(dead_code)]
    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    #[allow(dead_code)]
    pub fn div(&self, o: &RatFunc) -> RatFunc {
        self.mul(&o.inv())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn round_trip() {
        for p in [lp(&[(-3, 2), (1, -1)]), lp(&[(0, 5)]), lp(&[(2, 1), (4, 7)]), LaurentPoly::zero()] {
            assert_eq!(RatFunc::from_laurent(&p).to_laurent(), Some(p));
        }
    }

    #[test]
    fn field_operations() {
        let a = RatFunc::from_laurent(&lp(&[(0, 1), (1, 1)]));
        let b = RatFunc::from_laurent(&lp(&[(0, 1), (1, -1)]));
        let prod = a.mul(&b);
        assert_eq!(prod.to_laurent(), Some(lp(&[(0, 1), (2, -1)])));
        let back = prod.div(&b);
        assert_eq!(back, a);
        let half = RatFunc::from_laurent(&lp(&[(0, 1)])).div(&RatFunc::from_laurent(&lp(&[(0, 2)])));
        assert_eq!(half.to_laurent(), None);
        assert!(a.sub(&a).is_zero());
        let frac = a.div(&b);
        assert_eq!(frac.to_laurent(), None);
        assert_eq!(frac.mul(&b).to_laurent(), Some(lp(&[(0, 1), (1, 1)])));
    }
}
