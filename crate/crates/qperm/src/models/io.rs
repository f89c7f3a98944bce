//! JSON interchange for magic models.
//!
//! Weights travel as numerator/denominator strings so exact rationals
//! survive; complex entries travel as [re, im] doubles and must round-trip
//! bit-exactly, which the shortest-representation float printing guarantees
//! for finite values. Non-finite entries are rejected on both paths.

use ndarray::Array2;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Fiber, MagicModel, ModelError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl RationalJson {
    pub fn from_rational(r: &BigRational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }

    pub fn to_rational(&self) -> Result<BigRational, ModelError> {
        let num: BigInt = self
            .num
            .parse()
            .map_err(|_| ModelError::Shape(format!("bad rational numerator {:?}", self.num)))?;
        let den: BigInt = self
            .den
            .parse()
            .map_err(|_| ModelError::Shape(format!("bad rational denominator {:?}", self.den)))?;
        if den.is_zero() {
            return Err(ModelError::Shape("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    }
}

/// grid[i][j] is a K x K matrix stored as K rows of K [re, im] pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberJson {
    pub weight: RationalJson,
    pub grid: Vec<Vec<Vec<Vec<[f64; 2]>>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelJson {
    pub n: usize,
    pub k_dim: usize,
    pub fibers: Vec<FiberJson>,
}

pub fn model_to_json(m: &MagicModel) -> ModelJson {
    let fibers = m
        .fibers()
        .iter()
        .map(|f| {
            let grid = f
                .grid()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|entry| {
                            (0..m.kdim())
                                .map(|r| {
                                    (0..m.kdim())
                                        .map(|c| {
                                            let z = entry[(r, c)];
                                            [z.re, z.im]
                                        })
                                        .collect()
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            FiberJson {
                weight: RationalJson::from_rational(f.weight()),
                grid,
            }
        })
        .collect();
    ModelJson {
        n: m.n(),
        k_dim: m.kdim(),
        fibers,
    }
}

pub fn model_from_json(j: &ModelJson) -> Result<MagicModel, ModelError> {
    let mut fibers = Vec::with_capacity(j.fibers.len());
    for (fi, fj) in j.fibers.iter().enumerate() {
        let weight = fj.weight.to_rational()?;
        let mut grid = Vec::with_capacity(fj.grid.len());
        for row in &fj.grid {
            let mut grid_row = Vec::with_capacity(row.len());
            for entry in row {
                if entry.len() != j.k_dim || entry.iter().any(|r| r.len() != j.k_dim) {
                    return Err(ModelError::Shape(format!(
                        "fiber {fi}: matrix block is not {0} x {0}",
                        j.k_dim
                    )));
                }
                let mat = Array2::from_shape_fn((j.k_dim, j.k_dim), |(r, c)| {
                    Complex64::new(entry[r][c][0], entry[r][c][1])
                });
                grid_row.push(mat);
            }
            grid.push(grid_row);
        }
        fibers.push(Fiber::new(weight, grid)?);
    }
    MagicModel::new(j.n, j.k_dim, fibers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn weird_floats_model() -> MagicModel {
        // Exercise values whose decimal rendering is delicate: subnormals,
        // negative zero, many-digit fractions.
        let vals = [
            (0.1f64, -0.3f64),
            (5e-324, 1.0 / 3.0),
            (-0.0, 2.2250738585072014e-308),
            (1.7976931348623157e308, -1e-17),
        ];
        let grid: Vec<Vec<Array2<Complex64>>> = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        let (re, im) = vals[2 * i + j];
                        Array2::from_elem((1, 1), Complex64::new(re, im))
                    })
                    .collect()
            })
            .collect();
        let f = Fiber::new(BigRational::one(), grid).unwrap();
        MagicModel::new(2, 1, vec![f]).unwrap()
    }

    #[test]
    fn doubles_round_trip_bit_exactly() {
        let m = weird_floats_model();
        let text = serde_json::to_string(&model_to_json(&m)).unwrap();
        let back: ModelJson = serde_json::from_str(&text).unwrap();
        let m2 = model_from_json(&back).unwrap();
        for (fa, fb) in m.fibers().iter().zip(m2.fibers()) {
            assert_eq!(fa.weight(), fb.weight());
            for i in 0..2 {
                for j in 0..2 {
                    let a = fa.entry(i, j)[(0, 0)];
                    let b = fb.entry(i, j)[(0, 0)];
                    assert_eq!(a.re.to_bits(), b.re.to_bits(), "entry ({i},{j}) re");
                    assert_eq!(a.im.to_bits(), b.im.to_bits(), "entry ({i},{j}) im");
                }
            }
        }
    }

    #[test]
    fn big_weights_survive_as_strings() {
        let r = BigRational::new(
            "123456789012345678901234567890".parse().unwrap(),
            "987654321098765432109876543210987".parse().unwrap(),
        );
        let j = RationalJson::from_rational(&r);
        assert_eq!(j.to_rational().unwrap(), r);
    }

    #[test]
    fn malformed_json_fields_are_structural_errors() {
        let j = RationalJson {
            num: "1".into(),
            den: "0".into(),
        };
        assert!(matches!(j.to_rational(), Err(ModelError::Shape(_))));
        let j2 = RationalJson {
            num: "x".into(),
            den: "1".into(),
        };
        assert!(j2.to_rational().is_err());
    }

    #[test]
    fn shape_mismatch_is_rejected_on_load() {
        let m = weird_floats_model();
        let mut j = model_to_json(&m);
        j.k_dim = 2;
        assert!(matches!(model_from_json(&j), Err(ModelError::Shape(_))));
    }
}
