use orbispec::tables::{
    delta0, delta_k, dolbeault_spectrum, hodge_spectrum, hodge_table, hodge_table_csv, Field,
    HyperbolicSpace, SpectrumDescriptor,
};
use serde::{Deserialize, Serialize};

use super::{Ctx, ExperimentError};
use crate::registry::Experiment;
use crate::report::{Check, Outcome};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TablesParams {
    pub field: Field,
    pub ell: u32,
}

impl Default for TablesParams {
    fn default() -> Self {
        TablesParams {
            field: Field::R,
            ell: 3,
        }
    }
}

/// Hodge table of one space as CSV.
pub struct Tables;

impl Experiment for Tables {
    const NAME: &'static str = "tables";
    const SUMMARY: &'static str =
        "bottoms δ_k and spectra of the Hodge Laplacian on k-forms of one hyperbolic space";
    const VERIFIES: &'static str = "spec(Δ_k) = [δ_k, ∞), with an isolated 0 in the middle degree";
    type Params = TablesParams;

    fn run(p: &TablesParams, _: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let space = HyperbolicSpace::new(p.field, p.ell)?;
        let rows = hodge_table(&space)?;
        let m = space.m() as usize;
        let duality = (0..=m)
            .map(|k| (rows[k].delta - rows[m - k].delta).abs())
            .fold(0.0, f64::max);
        let d0 = delta0(m as i64, space.d() as i64)?;
        let checks = vec![
            Check::le("duality_defect", duality, 0.0),
            Check::le("delta0_defect", (rows[0].delta - d0).abs(), 0.0),
            Check::holds(
                "isolated_zero_only_in_middle",
                rows.iter()
                    .all(|r| r.spectrum.points().contains(&0.0) == (2 * r.k as usize == m)),
            ),
        ];
        Ok(Outcome::new(checks, &rows).with_artifact("csv", hodge_table_csv(&space)?))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepParams {
    pub max_m: u32,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams { max_m: 12 }
    }
}

/// Independent closed form: `4δ_k = (m − 1 − 2k)²` up to the middle degree,
/// mirrored above it.
fn real_quarter_times_four(m: i64, k: i64) -> i64 {
    let j = if 2 * k <= m { k } else { m - k };
    (m - 1 - 2 * j).pow(2)
}

fn complex_bottom(l: i64, k: i64) -> i64 {
    if k == l {
        1
    } else {
        (k - l).pow(2)
    }
}

/// Every real space up to dimension `max_m` and every complex one of real
/// dimension at most `max_m`.
pub struct HodgeSweep;

impl Experiment for HodgeSweep {
    const NAME: &'static str = "hodge-sweep";
    const SUMMARY: &'static str =
        "δ_k for F ∈ {R, C} and all degrees up to a dimension cap, against closed forms";
    const VERIFIES: &'static str =
        "the real and complex form-Laplacian bottoms and their middle-degree zero";
    type Params = SweepParams;

    fn run(p: &SweepParams, _: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let mut worst: f64 = 0.0;
        let mut zero_ok = true;
        let mut cases = 0usize;
        for m in 2..=p.max_m {
            let space = HyperbolicSpace::real(m)?;
            for k in 0..=m as i64 {
                let want = real_quarter_times_four(m as i64, k) as f64 / 4.0;
                worst = worst.max((delta_k(&space, k)? - want).abs());
                zero_ok &=
                    hodge_spectrum(&space, k)?.points().contains(&0.0) == (2 * k == m as i64);
                cases += 1;
            }
        }
        for l in 1..=p.max_m / 2 {
            let space = HyperbolicSpace::complex(l)?;
            for k in 0..=2 * l as i64 {
                worst = worst.max((delta_k(&space, k)? - complex_bottom(l as i64, k) as f64).abs());
                zero_ok &= hodge_spectrum(&space, k)?.points().contains(&0.0) == (k == l as i64);
                cases += 1;
            }
        }
        let h3 = HyperbolicSpace::real(3)?;
        let r3: Vec<f64> = (0..=3).map(|k| delta_k(&h3, k)).collect::<Result<_, _>>()?;
        let c2 = HyperbolicSpace::complex(2)?;
        let c2row: Vec<f64> = (0..=4).map(|k| delta_k(&c2, k)).collect::<Result<_, _>>()?;
        let middle = hodge_spectrum(&c2, 2)?;
        let checks = vec![
            Check::le("max_deviation", worst, 1e-12),
            Check::holds("zero_locus", zero_ok),
            Check::holds("real_3_row", r3 == [1.0, 0.0, 0.0, 1.0]),
            Check::holds("complex_2_row", c2row == [4.0, 1.0, 1.0, 1.0, 4.0]),
            Check::holds(
                "complex_2_middle",
                middle == SpectrumDescriptor::half_line(1.0, true),
            ),
        ];
        #[derive(Serialize)]
        struct Data {
            cases: usize,
            real_3: Vec<f64>,
            complex_2: Vec<f64>,
            complex_2_middle: String,
        }
        Ok(Outcome::new(
            checks,
            Data {
                cases,
                real_3: r3,
                complex_2: c2row,
                complex_2_middle: middle.to_string(),
            },
        ))
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoParams {}

/// The two Dolbeault spectra of the complex hyperbolic plane.
pub struct Dolbeault;

impl Experiment for Dolbeault {
    const NAME: &'static str = "dolbeault";
    const SUMMARY: &'static str =
        "Dolbeault Laplacian spectra on (p, q)-forms of the complex hyperbolic plane";
    const VERIFIES: &'static str = "(1,1)-forms carry {0}∪[1,∞) and functions [4,∞)";
    type Params = NoParams;

    fn run(_: &NoParams, _: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let mid = dolbeault_spectrum(2, 1, 1)?;
        let fun = dolbeault_spectrum(2, 0, 0)?;
        let checks = vec![
            Check::holds(
                "spectrum_1_1",
                mid == SpectrumDescriptor::half_line(1.0, true),
            ),
            Check::holds(
                "spectrum_0_0",
                fun == SpectrumDescriptor::half_line(4.0, false),
            ),
        ];
        Ok(Outcome::new(
            checks,
            serde_json::json!({ "p1q1": mid.to_string(), "p0q0": fun.to_string() }),
        ))
    }
}
