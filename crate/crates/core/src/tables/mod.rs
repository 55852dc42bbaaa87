//! Closed-form spectral data of hyperbolic spaces and their quotients.

mod descriptor;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use descriptor::{Interval, SpectrumDescriptor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("invalid hyperbolic space: {0}")]
    InvalidSpace(String),
    #[error("degree {k} outside 0..={m}")]
    Degree { k: i64, m: i64 },
    #[error("no closed form is available for {0} hyperbolic spaces; only the real and complex cases are tabulated")]
    Unsupported(Field),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid spectrum descriptor: {0}")]
    Descriptor(String),
}

/// Division algebra over which the hyperbolic space is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
    O,
}

impl Field {
    /// Real dimension `d`.
    pub fn real_dim(self) -> u32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
            Field::O => 8,
        }
    }

    pub fn from_real_dim(d: u32) -> Option<Field> {
        match d {
            1 => Some(Field::R),
            2 => Some(Field::C),
            4 => Some(Field::H),
            8 => Some(Field::O),
            _ => None,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Field::R => "real",
            Field::C => "complex",
            Field::H => "quaternionic",
            Field::O => "octonionic",
        };
        f.write_str(name)
    }
}

impl FromStr for Field {
    type Err = TableError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "R" | "REAL" => Ok(Field::R),
            "C" | "COMPLEX" => Ok(Field::C),
            "H" | "QUATERNIONIC" => Ok(Field::H),
            "O" | "OCTONIONIC" => Ok(Field::O),
            _ => Err(TableError::InvalidSpace(format!("unknown field {s:?}"))),
        }
    }
}

/// `X_F^ℓ` with real dimension `m = dℓ`, metric normalized to maximal
/// sectional curvature −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct HyperbolicSpace {
    field: Field,
    rank: u32,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    field: Field,
    rank: u32,
}

impl TryFrom<RawSpace> for HyperbolicSpace {
    type Error = TableError;
    fn try_from(r: RawSpace) -> Result<Self, TableError> {
        HyperbolicSpace::new(r.field, r.rank)
    }
}

impl From<HyperbolicSpace> for RawSpace {
    fn from(s: HyperbolicSpace) -> Self {
        RawSpace {
            field: s.field,
            rank: s.rank,
        }
    }
}

impl HyperbolicSpace {
    pub fn new(field: Field, rank: u32) -> Result<Self, TableError> {
        let min_rank = if field == Field::R { 2 } else { 1 };
        if rank < min_rank {
            return Err(TableError::InvalidSpace(format!(
                "rank {rank} too small for the {field} case"
            )));
        }
        if field == Field::O && rank != 2 {
            return Err(TableError::InvalidSpace(
                "the octonionic plane is the only octonionic space".into(),
            ));
        }
        Ok(HyperbolicSpace { field, rank })
    }

    pub fn real(m: u32) -> Result<Self, TableError> {
        Self::new(Field::R, m)
    }

    pub fn complex(rank: u32) -> Result<Self, TableError> {
        Self::new(Field::C, rank)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn d(&self) -> u32 {
        self.field.real_dim()
    }

    pub fn m(&self) -> u32 {
        self.d() * self.rank
    }
}

fn check_m_d(m: i64, d: i64) -> Result<(), TableError> {
    if m < 2 {
        return Err(TableError::Argument(format!(
            "dimension m = {m} must be at least 2"
        )));
    }
    if !matches!(d, 1 | 2 | 4 | 8) {
        return Err(TableError::Argument(format!("d = {d} is not 1, 2, 4 or 8")));
    }
    if m % d != 0 {
        return Err(TableError::Argument(format!(
            "m = {m} is not a multiple of d = {d}"
        )));
    }
    Ok(())
}

/// Bottom of the spectrum of the function Laplacian, `(m + d − 2)²/4`.
pub fn delta0(m: i64, d: i64) -> Result<f64, TableError> {
    check_m_d(m, d)?;
    let s = (m + d - 2) as f64;
    Ok(s * s / 4.0)
}

/// Bottom of the continuous spectrum of the Hodge Laplacian on `k`-forms.
pub fn delta_k(space: &HyperbolicSpace, k: i64) -> Result<f64, TableError> {
    let m = space.m() as i64;
    if !(0..=m).contains(&k) {
        return Err(TableError::Degree { k, m });
    }
    match space.field() {
        Field::R => {
            // work in halves so every value is exact
            let twice = if 2 * k <= m {
                2 * k - (m - 1)
            } else {
                2 * k - (m + 1)
            };
            Ok((twice * twice) as f64 / 4.0)
        }
        Field::C => {
            let l = space.rank() as i64;
            Ok(if k == l {
                1.0
            } else {
                ((k - l) * (k - l)) as f64
            })
        }
        f => Err(TableError::Unsupported(f)),
    }
}

/// Spectrum of the Hodge Laplacian on `k`-forms; 0 is an isolated point
/// exactly in the middle degree.
pub fn hodge_spectrum(space: &HyperbolicSpace, k: i64) -> Result<SpectrumDescriptor, TableError> {
    let bottom = delta_k(space, k)?;
    Ok(SpectrumDescriptor::half_line(
        bottom,
        2 * k == space.m() as i64,
    ))
}

/// Spectrum of the Dolbeault Laplacian on `(p, q)`-forms over `X_C^ℓ`.
pub fn dolbeault_spectrum(rank: i64, p: i64, q: i64) -> Result<SpectrumDescriptor, TableError> {
    if rank < 1 || p < 0 || q < 0 || p + q > 2 * rank {
        return Err(TableError::Argument(format!(
            "(p, q) = ({p}, {q}) invalid for rank {rank}"
        )));
    }
    let s = p + q - rank;
    Ok(if s == 0 {
        SpectrumDescriptor::half_line(1.0, true)
    } else {
        SpectrumDescriptor::half_line((s * s) as f64, false)
    })
}

/// Lower bound `(m − 1)² a² / 4` for the function Laplacian under sectional
/// curvature `≤ −a²`.
pub fn mckean_bound(m: i64, a: f64) -> Result<f64, TableError> {
    if m < 2 || !(a > 0.0) || !a.is_finite() {
        return Err(TableError::Argument(format!(
            "need m ≥ 2 and a > 0, got m = {m}, a = {a}"
        )));
    }
    let s = (m - 1) as f64;
    Ok(s * s * a * a / 4.0)
}

/// Setting for the Dirac operator on hyperbolic surfaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiracContext {
    FullPlane,
    InfiniteArea,
    FiniteAreaSpinTrivial,
    FiniteAreaSpinNontrivial,
}

impl DiracContext {
    pub const ALL: [DiracContext; 4] = [
        DiracContext::FullPlane,
        DiracContext::InfiniteArea,
        DiracContext::FiniteAreaSpinTrivial,
        DiracContext::FiniteAreaSpinNontrivial,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DiracContext::FullPlane => "full_plane",
            DiracContext::InfiniteArea => "infinite_area",
            DiracContext::FiniteAreaSpinTrivial => "finite_area_spin_trivial",
            DiracContext::FiniteAreaSpinNontrivial => "finite_area_spin_nontrivial",
        }
    }
}

/// Essential spectrum of the Dirac operator.
pub fn dirac_table(ctx: DiracContext) -> SpectrumDescriptor {
    match ctx {
        DiracContext::FiniteAreaSpinNontrivial => SpectrumDescriptor::empty(),
        _ => SpectrumDescriptor::real_line(),
    }
}

/// One row of a Hodge table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodgeRow {
    pub k: i64,
    pub delta: f64,
    pub spectrum: SpectrumDescriptor,
}

pub fn hodge_table(space: &HyperbolicSpace) -> Result<Vec<HodgeRow>, TableError> {
    (0..=space.m() as i64)
        .map(|k| {
            Ok(HodgeRow {
                k,
                delta: delta_k(space, k)?,
                spectrum: hodge_spectrum(space, k)?,
            })
        })
        .collect()
}

/// CSV with columns `k,delta_k,spectrum`.
pub fn hodge_table_csv(space: &HyperbolicSpace) -> Result<String, TableError> {
    let mut out = String::from("k,delta_k,spectrum\n");
    for row in hodge_table(space)? {
        out.push_str(&format!("{},{},\"{}\"\n", row.k, row.delta, row.spectrum));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deltas(space: HyperbolicSpace) -> Vec<f64> {
        hodge_table(&space)
            .unwrap()
            .into_iter()
            .map(|r| r.delta)
            .collect()
    }

    #[test]
    fn delta0_values() {
        assert_eq!(delta0(2, 1).unwrap(), 0.25);
        assert_eq!(delta0(3, 1).unwrap(), 1.0);
        assert_eq!(delta0(4, 2).unwrap(), 4.0);
        assert!(delta0(4, 3).is_err());
        assert!(delta0(1, 1).is_err());
    }

    #[test]
    fn hodge_rows() {
        assert_eq!(
            deltas(HyperbolicSpace::real(3).unwrap()),
            vec![1.0, 0.0, 0.0, 1.0]
        );
        assert_eq!(
            deltas(HyperbolicSpace::complex(2).unwrap()),
            vec![4.0, 1.0, 1.0, 1.0, 4.0]
        );
        let r4 = HyperbolicSpace::real(4).unwrap();
        assert_eq!(delta_k(&r4, 2).unwrap(), 0.25);
        assert_eq!(hodge_spectrum(&r4, 2).unwrap().to_string(), "{0}∪[0.25,∞)");
        assert_eq!(
            hodge_spectrum(&HyperbolicSpace::real(3).unwrap(), 0)
                .unwrap()
                .to_string(),
            "[1,∞)"
        );
        let c2 = HyperbolicSpace::complex(2).unwrap();
        assert_eq!(hodge_spectrum(&c2, 1).unwrap().to_string(), "[1,∞)");
        assert_eq!(hodge_spectrum(&c2, 2).unwrap().to_string(), "{0}∪[1,∞)");
    }

    #[test]
    fn h_and_o_are_refused() {
        let h = HyperbolicSpace::new(Field::H, 2).unwrap();
        assert_eq!(delta_k(&h, 1), Err(TableError::Unsupported(Field::H)));
        let o = HyperbolicSpace::new(Field::O, 2).unwrap();
        assert!(hodge_spectrum(&o, 0).is_err());
        assert!(HyperbolicSpace::new(Field::O, 3).is_err());
    }

    #[test]
    fn dolbeault_rows() {
        assert_eq!(
            dolbeault_spectrum(2, 1, 1).unwrap().to_string(),
            "{0}∪[1,∞)"
        );
        assert_eq!(dolbeault_spectrum(2, 0, 0).unwrap().to_string(), "[4,∞)");
        assert_eq!(dolbeault_spectrum(3, 1, 1).unwrap().to_string(), "[1,∞)");
        assert!(dolbeault_spectrum(1, 2, 1).is_err());
    }

    #[test]
    fn mckean_values() {
        assert_eq!(mckean_bound(2, 1.0).unwrap(), 0.25);
        assert_eq!(mckean_bound(3, 1.0).unwrap(), 1.0);
        assert_eq!(mckean_bound(2, 2.0).unwrap(), 1.0);
        for m in 2..=12 {
            assert_eq!(mckean_bound(m, 1.0).unwrap(), delta0(m, 1).unwrap());
        }
    }

    #[test]
    fn dirac_rows() {
        assert_eq!(dirac_table(DiracContext::FullPlane).to_string(), "ℝ");
        assert_eq!(dirac_table(DiracContext::InfiniteArea).to_string(), "ℝ");
        assert_eq!(
            dirac_table(DiracContext::FiniteAreaSpinTrivial).to_string(),
            "ℝ"
        );
        assert!(dirac_table(DiracContext::FiniteAreaSpinNontrivial).is_empty());
    }

    #[test]
    fn csv_layout() {
        let csv = hodge_table_csv(&HyperbolicSpace::real(2).unwrap()).unwrap();
        assert_eq!(csv, "k,delta_k,spectrum\n0,0.25,\"[0.25,∞)\"\n1,0.25,\"{0}∪[0.25,∞)\"\n2,0.25,\"[0.25,∞)\"\n");
    }
}
