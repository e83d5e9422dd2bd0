use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::tableau::RowStandardTableau;
use crate::error::{Error, Result};
use crate::qarith::LaurentPoly;

/// A finite linear combination of tableau homomorphisms from one Specht module
/// into one permutation module. Coefficients are Laurent polynomials in `q`;
/// after [`FormalHomSum::evaluate_minus_one`] they are integer constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalHomSum {
    shape: Vec<usize>,
    ty: Vec<usize>,
    terms: BTreeMap<RowStandardTableau, LaurentPoly>,
}

/// Accumulates `coeff` onto `key`, dropping the entry if it cancels.
pub(crate) fn accumulate(
    map: &mut BTreeMap<RowStandardTableau, LaurentPoly>,
    key: &RowStandardTableau,
    coeff: &LaurentPoly,
) {
    if coeff.is_zero() {
        return;
    }
    match map.get_mut(key) {
        Some(c) => {
            *c += coeff;
            if c.is_zero() {
                map.remove(key);
            }
        }
        None => {
            map.insert(key.clone(), coeff.clone());
        }
    }
}

impl FormalHomSum {
    pub fn zero(shape: Vec<usize>, ty: Vec<usize>) -> Self {
        FormalHomSum { shape, ty, terms: BTreeMap::new() }
    }

    /// The single homomorphism attached to `t`, with type equal to its content.
    pub fn from_tableau(t: &RowStandardTableau) -> Self {
        let mut s = FormalHomSum::zero(t.shape(), t.content());
        s.terms.insert(t.clone(), LaurentPoly::one());
        s
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Target type; may contain zero parts.
    pub fn ty(&self) -> &[usize] {
        &self.ty
    }

    pub fn terms(&self) -> &BTreeMap<RowStandardTableau, LaurentPoly> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &RowStandardTableau) -> LaurentPoly {
        self.terms.get(t).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    fn check_term(&self, t: &RowStandardTableau) -> Result<()> {
        if t.shape() != self.shape {
            return Err(Error::Precondition(format!(
                "tableau {t} does not have shape {:?}",
                self.shape
            )));
        }
        let mut content = t.content();
        let mut ty = self.ty.clone();
        while content.last() == Some(&0) {
            content.pop();
        }
        while ty.last() == Some(&0) {
            ty.pop();
        }
        if content != ty {
            return Err(Error::Precondition(format!(
                "tableau {t} does not have type {:?}",
                self.ty
            )));
        }
        Ok(())
    }

    /// Adds `coeff · Θ_t`, checking shape and type.
    pub fn add_term(&mut self, t: &RowStandardTableau, coeff: &LaurentPoly) -> Result<()> {
        self.check_term(t)?;
        accumulate(&mut self.terms, t, coeff);
        Ok(())
    }

    pub(crate) fn add_term_unchecked(&mut self, t: &RowStandardTableau, coeff: &LaurentPoly) {
        debug_assert!(self.check_term(t).is_ok());
        accumulate(&mut self.terms, t, coeff);
    }

    /// `self + c · other`.
    pub fn add_scaled(&mut self, other: &FormalHomSum, c: &LaurentPoly) -> Result<()> {
        if other.shape != self.shape || other.ty != self.ty {
            return Err(Error::Precondition("sums have different shape or type".into()));
        }
        for (t, v) in &other.terms {
            accumulate(&mut self.terms, t, &(v * c));
        }
        Ok(())
    }

    pub fn scaled(&self, c: &LaurentPoly) -> FormalHomSum {
        let mut out = FormalHomSum::zero(self.shape.clone(), self.ty.clone());
        for (t, v) in &self.terms {
            accumulate(&mut out.terms, t, &(v * c));
        }
        out
    }

    /// Every tableau in the support is semistandard.
    pub fn is_canonical(&self) -> bool {
        self.terms.keys().all(RowStandardTableau::is_semistandard)
    }

    /// Specialises every coefficient at `q = -1`, dropping the terms that vanish.
    pub fn evaluate_minus_one(&self) -> FormalHomSum {
        let mut out = FormalHomSum::zero(self.shape.clone(), self.ty.clone());
        for (t, v) in &self.terms {
            let c = v.eval_minus_one();
            if c != BigInt::from(0) {
                out.terms.insert(t.clone(), LaurentPoly::constant(c));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(t, c)| TermRecord { rows: t.rows().to_vec(), coeff: coeff_json(c) })
            .collect();
        serde_json::json!({ "shape": self.shape, "terms": terms, "type": self.ty })
    }
}

fn coeff_json(c: &LaurentPoly) -> serde_json::Value {
    match (c.low_degree(), c.high_degree()) {
        (Some(0), Some(0)) => {
            let v = c.coeff(0);
            match i64::try_from(&v) {
                Ok(i) => serde_json::Value::from(i),
                Err(_) => serde_json::Value::from(v.to_string()),
            }
        }
        _ => serde_json::Value::from(c.to_string()),
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    rows: Vec<Vec<u16>>,
    coeff: serde_json::Value,
}
