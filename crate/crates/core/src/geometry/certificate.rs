use serde::{Deserialize, Serialize};

use super::{dominates, GeometryError, InputSet};

/// Verifiable output of a maxima computation.
///
/// `maxima` lists the maximal points left to right. `dominators[i]` is
/// `Some(j)` when point `j` witnesses that point `i` is not maximal and
/// `None` for maximal points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub maxima: Vec<usize>,
    pub dominators: Vec<Option<usize>>,
}

impl Certificate {
    pub fn new(maxima: Vec<usize>, dominators: Vec<Option<usize>>) -> Self {
        Certificate { maxima, dominators }
    }

    pub fn len(&self) -> usize {
        self.dominators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dominators.is_empty()
    }

    pub fn is_maximal(&self, i: usize) -> bool {
        self.dominators.get(i).is_some_and(Option::is_none)
    }

    pub fn dominator(&self, i: usize) -> Option<usize> {
        self.dominators.get(i).copied().flatten()
    }

    /// Maxima indices in ascending index order.
    pub fn maxima_set(&self) -> Vec<usize> {
        let mut set = self.maxima.clone();
        set.sort_unstable();
        set
    }
}

/// Why a well-formed certificate fails to certify its input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `maxima[position]` and `maxima[position + 1]` do not form a staircase step.
    NotStaircase { position: usize },
    /// The index is listed twice in the maxima sequence.
    RepeatedMaximum { index: usize },
    /// The index is listed as maximal and also carries a dominator.
    MaximumWithDominator { index: usize },
    /// The index is neither listed as maximal nor given a dominator.
    Unaccounted { index: usize },
    /// The claimed dominator does not dominate the point.
    BadDominator { index: usize, dominator: usize },
}

/// Checks a certificate in time linear in `n`.
///
/// Returns `Ok(true)` iff the maxima form a staircase, every index is either
/// maximal or dominated, and every listed dominator really dominates.
/// Malformed certificates (wrong length, out-of-range index) are errors.
pub fn verify_certificate(input: &InputSet, cert: &Certificate) -> Result<bool, GeometryError> {
    explain_certificate(input, cert).map(|v| v.is_none())
}

/// Like [`verify_certificate`] but reports the first violation found.
pub fn explain_certificate(
    input: &InputSet,
    cert: &Certificate,
) -> Result<Option<Violation>, GeometryError> {
    let n = input.len();
    if cert.dominators.len() != n {
        return Err(GeometryError::LengthMismatch {
            got: cert.dominators.len(),
            n,
        });
    }
    let out_of_range = cert
        .maxima
        .iter()
        .copied()
        .chain(cert.dominators.iter().flatten().copied())
        .find(|&i| i >= n);
    if let Some(index) = out_of_range {
        return Err(GeometryError::IndexOutOfRange { index, n });
    }

    let mut listed = vec![false; n];
    for &i in &cert.maxima {
        if std::mem::replace(&mut listed[i], true) {
            return Ok(Some(Violation::RepeatedMaximum { index: i }));
        }
        if cert.dominators[i].is_some() {
            return Ok(Some(Violation::MaximumWithDominator { index: i }));
        }
    }

    for (i, dom) in cert.dominators.iter().enumerate() {
        match *dom {
            None if !listed[i] => return Ok(Some(Violation::Unaccounted { index: i })),
            Some(j) if !dominates(&input[j], &input[i]) => {
                return Ok(Some(Violation::BadDominator {
                    index: i,
                    dominator: j,
                }));
            }
            _ => {}
        }
    }

    // Consecutive maxima must step right and down; exact duplicates may sit
    // side by side since neither dominates the other.
    for (position, pair) in cert.maxima.windows(2).enumerate() {
        let (a, b) = (input[pair[0]], input[pair[1]]);
        let duplicate = a == b;
        if !(duplicate || (a.x < b.x && a.y > b.y)) {
            return Ok(Some(Violation::NotStaircase { position }));
        }
    }

    Ok(None)
}
