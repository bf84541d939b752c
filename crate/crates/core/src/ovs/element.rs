use crate::error::{Error, Result};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A vector of the ordered space, in the system's coordinate basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    pub coords: DVector<f64>,
}

/// A linear functional; evaluation is the Euclidean pairing of coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    pub coords: DVector<f64>,
}

macro_rules! vector_newtype {
    ($t:ident) => {
        impl $t {
            pub fn new(coords: DVector<f64>) -> Self {
                Self { coords }
            }

            /// Rejects non-finite coordinates.
            pub fn checked(coords: DVector<f64>) -> Result<Self> {
                if coords.iter().all(|v| v.is_finite()) {
                    Ok(Self { coords })
                } else {
                    Err(Error::NonFinite)
                }
            }

            pub fn from_slice(xs: &[f64]) -> Self {
                Self { coords: DVector::from_column_slice(xs) }
            }

            pub fn zeros(dim: usize) -> Self {
                Self { coords: DVector::zeros(dim) }
            }

            pub fn basis(dim: usize, k: usize) -> Self {
                let mut coords = DVector::zeros(dim);
                coords[k] = 1.0;
                Self { coords }
            }

            pub fn dim(&self) -> usize {
                self.coords.len()
            }

            pub fn norm(&self) -> f64 {
                self.coords.norm()
            }

            pub fn scale(&self, s: f64) -> Self {
                Self { coords: &self.coords * s }
            }

            pub fn expect_dim(&self, dim: usize) -> Result<()> {
                if self.dim() == dim {
                    Ok(())
                } else {
                    Err(Error::DimensionMismatch { expected: dim, got: self.dim() })
                }
            }

            pub fn to_vec(&self) -> Vec<f64> {
                self.coords.iter().copied().collect()
            }
        }

        impl Add for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                $t { coords: &self.coords + &rhs.coords }
            }
        }

        impl Sub for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                $t { coords: &self.coords - &rhs.coords }
            }
        }

        impl Mul<f64> for &$t {
            type Output = $t;
            fn mul(self, rhs: f64) -> $t {
                self.scale(rhs)
            }
        }

        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                self.scale(-1.0)
            }
        }
    };
}

vector_newtype!(Element);
vector_newtype!(Functional);

impl Functional {
    pub fn eval(&self, x: &Element) -> f64 {
        self.coords.dot(&x.coords)
    }
}
