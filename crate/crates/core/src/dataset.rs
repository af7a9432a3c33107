use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Ball bearing endurance data (millions of revolutions to failure), 24
/// values in listing order. Ships as `data/ballbearing.txt` as well.
pub const BALL_BEARING: [f64; 24] = [
    33.00, 68.64, 173.40, 41.52, 42.12, 68.64, 68.88, 45.60, 48.48, 84.12, 93.12, 98.64, 105.12,
    105.84, 51.84, 51.96, 54.12, 17.88, 55.56, 127.92, 128.04, 67.80, 67.80, 28.92,
];

/// Non-empty sample of strictly positive, finite lifetimes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct Dataset<T> {
    values: Vec<T>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidData("empty dataset".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > T::zero()))
        {
            return Err(Error::InvalidData(format!(
                "observation #{} = {v} is not strictly positive and finite",
                i + 1
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mean(&self) -> T {
        self.sum() / T::of(self.len() as f64)
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc.max(v))
    }
}

impl Dataset<f64> {
    pub fn ball_bearing() -> Self {
        Self::new(BALL_BEARING.to_vec()).expect("bundled data is valid")
    }
}

impl<T: Scalar> TryFrom<Vec<T>> for Dataset<T> {
    type Error = Error;

    fn try_from(values: Vec<T>) -> Result<Self> {
        Self::new(values)
    }
}

impl<T> From<Dataset<T>> for Vec<T> {
    fn from(d: Dataset<T>) -> Self {
        d.values
    }
}
