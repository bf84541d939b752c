//! Exact rational linear algebra used by the polyhedral routes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
pub type QVec = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact conversion of a finite double (every double is a dyadic rational).
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn vec_from_f64(xs: &[f64]) -> Option<QVec> {
    xs.iter().map(|&x| from_f64(x)).collect()
}

pub fn vec_to_f64(xs: &[Q]) -> Vec<f64> {
    xs.iter().map(to_f64).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [QVec]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[QVec]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of { z : M z = 0 } for a matrix given by rows with `cols` columns.
pub fn nullspace(rows: &[QVec], cols: usize) -> Vec<QVec> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

pub fn determinant(m: &[QVec]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let sub = &f * &a[c][j];
                a[i][j] -= sub;
            }
        }
    }
    det
}

/// Sylvester's criterion: every leading principal minor strictly positive.
pub fn is_positive_definite(m: &[QVec]) -> bool {
    (1..=m.len()).all(|k| {
        let minor: Vec<QVec> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        determinant(&minor).is_positive()
    })
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &[QVec]) -> Option<Vec<QVec>> {
    let n = m.len();
    let mut aug: Vec<QVec> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[QVec], v: &[Q]) -> QVec {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Scale a nonzero vector so its largest absolute entry is one.
pub fn normalize_max(v: &[Q]) -> QVec {
    let m = v
        .iter()
        .map(|x| x.abs())
        .fold(Q::zero(), |a, b| if b > a { b } else { a });
    if m.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &m).collect()
}

/// Serializes as `{"num": n, "den": d}`; integers outside the `i64` range
/// are written as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactQ(pub Q);

impl serde::Serialize for ExactQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ExactQ", 2)?;
        match (self.0.numer().to_i64(), self.0.denom().to_i64()) {
            (Some(n), Some(d)) => {
                st.serialize_field("num", &n)?;
                st.serialize_field("den", &d)?;
            }
            _ => {
                st.serialize_field("num", &self.0.numer().to_string())?;
                st.serialize_field("den", &self.0.denom().to_string())?;
            }
        }
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for ExactQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Int {
            N(i64),
            S(String),
        }
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            num: Int,
            den: Int,
        }
        let parse = |v: Int| -> Result<BigInt, D::Error> {
            match v {
                Int::N(n) => Ok(BigInt::from(n)),
                Int::S(s) => s.parse().map_err(serde::de::Error::custom),
            }
        };
        let raw = Raw::deserialize(d)?;
        let den = parse(raw.den)?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(ExactQ(Q::new(parse(raw.num)?, den)))
    }
}

pub fn exact_vec(xs: &[Q]) -> Vec<ExactQ> {
    xs.iter().cloned().map(ExactQ).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(&rows[0], v).is_zero());
        }
        assert_eq!(rank(&rows), 1);
    }

    #[test]
    fn determinant_and_inverse_agree() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        assert_eq!(determinant(&m), q(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert!(inverse(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }

    #[test]
    fn sylvester_rejects_indefinite() {
        let spd = vec![vec![q(2), q(1)], vec![q(1), q(2)]];
        let indef = vec![vec![qr(-1, 2), qr(-1, 2)], vec![qr(-1, 2), qr(1, 2)]];
        assert!(is_positive_definite(&spd));
        assert!(!is_positive_definite(&indef));
    }

    #[test]
    fn float_conversion_is_exact() {
        assert_eq!(from_f64(0.75).unwrap(), qr(3, 4));
        assert!(from_f64(f64::NAN).is_none());
    }
}
