use crate::arith::{normalize_primitive, primitive_int, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

/// A point of ℙ² or ℙ³ with coprime integer coordinates, first nonzero
/// coordinate positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    pub fn new(coords: &[Rat]) -> Result<Self> {
        check_len(coords.len())?;
        Ok(ProjPoint {
            coords: normalize_primitive(coords)?,
        })
    }

    pub fn from_big(coords: &[BigInt]) -> Result<Self> {
        check_len(coords.len())?;
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroInput("ProjPoint"));
        }
        Ok(ProjPoint {
            coords: primitive_int(coords),
        })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        let v: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
        ProjPoint::from_big(&v)
    }

    /// Projective dimension (2 or 3).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn as_rats(&self) -> Vec<Rat> {
        self.coords
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect()
    }

    /// Max-norm of the coordinates.
    pub fn height(&self) -> BigInt {
        self.coords
            .iter()
            .map(|c| num_traits::sign::abs(c.clone()))
            .max()
            .unwrap()
    }

    /// Accepts `[a:b:c]`, `a:b:c` or whitespace/comma separated integers.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = inner
            .split(|c: char| c == ':' || c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let coords = parts
            .iter()
            .map(|p| {
                p.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coordinate {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ProjPoint::from_big(&coords).map_err(|e| match e {
            Error::Parse(_) => e,
            other => Error::Parse(other.to_string()),
        })
    }
}

fn check_len(n: usize) -> Result<()> {
    if n == 3 || n == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "points need 3 or 4 coordinates, got {n}"
        )))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
