//! Exact positivity of the Hermitian part of a real 2-form.

use serde::Serialize;

use crate::algebra::{Bidegree, Form, Scalar};
use crate::error::{Error, Result};
use crate::operators::{hermitian_matrix, leading_minors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    Positive,
    NotPositive,
    /// Coefficients are still symbolic.
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityProfile {
    pub hmat: Vec<Vec<Scalar>>,
    pub minors: Vec<Scalar>,
    pub verdict: Verdict,
}

pub fn positivity_check(omega: &Form) -> Result<PositivityProfile> {
    let frame = omega.frame();
    let n = frame.complex_rank().ok_or_else(|| Error::Structural("positivity needs a complex frame".into()))?;
    let part = omega.project_bidegree(Bidegree::new(1, 1));
    if part.conjugate() != part {
        return Err(Error::Structural("the (1,1) part is not real".into()));
    }
    let hmat = hermitian_matrix(omega)?;
    for j in 0..n {
        for k in 0..n {
            if hmat[j][k] != hmat[k][j].conj() {
                return Err(Error::Structural("the (1,1) part is not Hermitian".into()));
            }
        }
    }
    let minors = leading_minors(&hmat);
    let mut verdict = Verdict::Positive;
    for m in &minors {
        match m.as_constant().and_then(|c| c.real_sign()) {
            Some(1) => {}
            Some(_) => {
                verdict = Verdict::NotPositive;
                break;
            }
            None => verdict = Verdict::Undecided,
        }
    }
    Ok(PositivityProfile { hmat, minors, verdict })
}

impl PositivityProfile {
    pub fn is_positive(&self) -> bool {
        self.verdict == Verdict::Positive
    }
}
