use super::{Family, JordanAlgebra, SimpleFactor};
use crate::error::{Error, Result};
use crate::linalg::numerical_rank;
use crate::ovs::{Element, Functional};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Orthogonal pure states with dual effects, `⟨ωᵢ, eⱼ⟩ = δᵢⱼ`.
#[derive(Debug, Clone)]
pub struct Frame {
    pub states: Vec<Element>,
    pub effects: Vec<Functional>,
}

/// One simple summand of a central decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentralSummand {
    pub index: usize,
    pub factor: SimpleFactor,
    pub offset: usize,
    /// `dim × dim_k` coordinate embedding.
    pub embedding: DMatrix<f64>,
    /// Rank of the span of sampled pure states of this summand.
    pub pure_span: usize,
}

impl JordanAlgebra {
    fn require_simple(&self, op: &str) -> Result<&SimpleFactor> {
        if self.is_simple() {
            Ok(&self.summands()[0])
        } else {
            Err(Error::Precondition(format!("{op} needs a simple algebra; call it per summand")))
        }
    }

    pub fn canonical_frame(&self) -> Result<Frame> {
        let f = self.require_simple("canonical_frame")?;
        let gram = self.gram();
        let states: Vec<Element> = match f.family {
            Family::SpinFactor => [1.0, -1.0]
                .iter()
                .map(|&sign| {
                    let mut c = DVector::zeros(f.dim);
                    c[0] = 0.5;
                    c[1] = 0.5 * sign;
                    Element::new(c)
                })
                .collect(),
            _ => (0..f.rank).map(|i| Element::basis(f.dim, i)).collect(),
        };
        let effects = states.iter().map(|s| Functional::new(&gram * &s.coords)).collect();
        Ok(Frame { states, effects })
    }

    /// Pure state with equal nonzero overlap on every canonical frame effect.
    pub fn overlap_state(&self) -> Result<Element> {
        let f = self.require_simple("overlap_state")?;
        Ok(match f.family {
            Family::SpinFactor => {
                let mut c = DVector::zeros(f.dim);
                c[0] = 0.5;
                c[2] = 0.5;
                Element::new(c)
            }
            _ => {
                let n = f.matrix_size();
                let r = f.rank as f64;
                let v = DVector::from_fn(n, |i, _| {
                    let keep = f.family != Family::QuatHerm || i % 2 == 0;
                    crate::linalg::C64::new(if keep { 1.0 / r.sqrt() } else { 0.0 }, 0.0)
                });
                Element::new(f.pure_from_vector(&v))
            }
        })
    }

    /// Simple summands with their coordinate embeddings. The pure states of
    /// each summand are sampled and their spans checked to be complementary.
    pub fn central_decomposition(&self) -> Result<Vec<CentralSummand>> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut out = Vec::with_capacity(self.summands().len());
        let mut all = Vec::new();
        for (k, s) in self.summands().iter().enumerate() {
            let samples: Vec<DVector<f64>> =
                (0..4 * s.dim + 4).map(|_| self.random_pure_in(k, &mut rng).coords).collect();
            let span = numerical_rank(&DMatrix::from_columns(&samples), 1e-9);
            if span != s.dim {
                return Err(Error::InvalidAlgebra(format!(
                    "pure states of summand {k} span {span}, expected {}",
                    s.dim
                )));
            }
            all.extend(samples);
            let embedding = DMatrix::from_fn(self.dim(), s.dim, |r, c| {
                if r == self.offset(k) + c {
                    1.0
                } else {
                    0.0
                }
            });
            out.push(CentralSummand { index: k, factor: s.clone(), offset: self.offset(k), embedding, pure_span: span });
        }
        let total = numerical_rank(&DMatrix::from_columns(&all), 1e-9);
        if total != self.dim() {
            return Err(Error::InvalidAlgebra(format!("summand spans are not complementary: {total}")));
        }
        Ok(out)
    }
}
