//! JSON interchange for matrices, operators, and automorphisms.
//!
//! Wire formats:
//!
//! ```json
//! {"dim": 2, "entries": [[[1.0, 0.0], [0.0, -1.0]], [[0.0, 1.0], [1.0, 0.0]]]}
//! ```
//!
//! `entries[i][j] = [re, im]` in row-major order. Operators wrap a matrix
//! with a kind tag; automorphisms are tagged unions on `"form"`:
//!
//! ```json
//! {"form": "canonical", "p": -1.0, "operator": {"kind": "linear", "matrix": ...}}
//! {"form": "alt", "p": -1.0, "r": 0.5, "operator": ...}
//! {"form": "congruence", "operator": ...}
//! ```
//!
//! Serialization uses the shortest `f64` representation that parses back to
//! the identical bits, so write-read round trips are exact. Matrices read
//! as Hermitian are validated (relative asymmetry above `1e-9` is rejected,
//! anything smaller is symmetrized exactly).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::automorphism::{AltParams, AutomorphismForm, CanonicalParams, CongruenceParams};
use crate::error::{Error, Result};
use crate::hermitian::{hermitianize, HermitianMatrix, C64};
use crate::interval::Effect;
use crate::moebius::MoebiusParam;
use crate::operator::{BoundedOperator, OperatorKind};

const HERMITIAN_ASYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_complex(m: &DMatrix<C64>) -> Self {
        MatrixJson {
            dim: m.nrows(),
            entries: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }

    pub fn to_complex(&self) -> Result<DMatrix<C64>> {
        if self.entries.len() != self.dim {
            return Err(Error::InvalidData(format!(
                "matrix declares dim {} but has {} rows",
                self.dim,
                self.entries.len()
            )));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.dim {
                return Err(Error::InvalidData(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    self.dim
                )));
            }
        }
        for row in &self.entries {
            for &[re, im] in row {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::InvalidData(
                        "matrix entries must be finite".into(),
                    ));
                }
            }
        }
        Ok(DMatrix::from_fn(self.dim, self.dim, |i, j| {
            C64::new(self.entries[i][j][0], self.entries[i][j][1])
        }))
    }

    /// Reads the matrix as Hermitian: rejects visible asymmetry, absorbs
    /// round-off level asymmetry by exact symmetrization.
    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        let m = self.to_complex()?;
        let asym = (&m - m.adjoint()).norm();
        if asym > HERMITIAN_ASYMMETRY_TOL * (1.0 + m.norm()) {
            return Err(Error::InvalidData(format!(
                "matrix is not Hermitian: ||M - M*|| = {asym:.3e}"
            )));
        }
        hermitianize(&m)
    }

    pub fn to_effect(&self) -> Result<Effect> {
        Effect::new(self.to_hermitian()?)
    }
}

impl From<&HermitianMatrix> for MatrixJson {
    fn from(h: &HermitianMatrix) -> Self {
        MatrixJson::from_complex(h.matrix())
    }
}

impl From<&Effect> for MatrixJson {
    fn from(e: &Effect) -> Self {
        MatrixJson::from(e.matrix())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub kind: OperatorKind,
    pub matrix: MatrixJson,
}

impl From<&BoundedOperator> for OperatorJson {
    fn from(op: &BoundedOperator) -> Self {
        OperatorJson {
            kind: op.kind(),
            matrix: MatrixJson::from_complex(op.matrix()),
        }
    }
}

impl OperatorJson {
    pub fn to_operator(&self) -> Result<BoundedOperator> {
        BoundedOperator::new(self.kind, self.matrix.to_complex()?)
    }
}

/// An automorphism in any parameterization, tagged by `"form"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum AutomorphismJson {
    Canonical {
        p: f64,
        operator: OperatorJson,
    },
    Alt {
        p: f64,
        r: f64,
        operator: OperatorJson,
    },
    Congruence {
        operator: OperatorJson,
    },
}

impl AutomorphismJson {
    pub fn to_form(&self) -> Result<AutomorphismForm> {
        Ok(match self {
            AutomorphismJson::Canonical { p, operator } => AutomorphismForm::Canonical(
                CanonicalParams::new(MoebiusParam::new(*p)?, operator.to_operator()?)?,
            ),
            AutomorphismJson::Alt { p, r, operator } => AutomorphismForm::Alt(AltParams::new(
                MoebiusParam::new(*p)?,
                *r,
                operator.to_operator()?,
            )?),
            AutomorphismJson::Congruence { operator } => {
                AutomorphismForm::Congruence(CongruenceParams::new(operator.to_operator()?)?)
            }
        })
    }
}

impl From<&AutomorphismForm> for AutomorphismJson {
    fn from(form: &AutomorphismForm) -> Self {
        match form {
            AutomorphismForm::Canonical(c) => AutomorphismJson::Canonical {
                p: c.p().value(),
                operator: OperatorJson::from(c.operator()),
            },
            AutomorphismForm::Alt(a) => AutomorphismJson::Alt {
                p: a.p().value(),
                r: a.ratio(),
                operator: OperatorJson::from(a.operator()),
            },
            AutomorphismForm::Congruence(g) => AutomorphismJson::Congruence {
                operator: OperatorJson::from(g.operator()),
            },
        }
    }
}

/// A comparable pair for order checks: intended as `a <= b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairJson {
    pub a: MatrixJson,
    pub b: MatrixJson,
}
