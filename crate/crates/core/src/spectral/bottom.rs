use std::fmt;
use std::io;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::warped::{eigen_bottom, radial_reduce, EndKind, WarpedEnd};
use super::SpectralError;
use crate::tables;

/// Truncation lengths, grid spacing and tolerances for [`ess_bottom`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssParams {
    pub t_sequence: Vec<f64>,
    pub h: f64,
    /// Allowed spread between extrapolations and distance to the target.
    pub tolerance: f64,
    /// Allowed gap between the extrapolated and potential-limit readings.
    pub disagreement: f64,
}

impl Default for EssParams {
    fn default() -> Self {
        EssParams {
            t_sequence: vec![10.0, 20.0, 30.0, 40.0],
            h: 1e-3,
            tolerance: 1e-3,
            disagreement: 1e-2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// How the estimate is held against the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Equal,
    AtLeast,
}

const NOTE: &str =
    "the compact core is not meshed: Dirichlet bracketing lets it add only discrete \
                    spectrum, so the essential bottom is the minimum over the ends";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub end: EndKind,
    pub n: i64,
    #[serde(rename = "T_sequence")]
    pub t_sequence: Vec<f64>,
    pub lambda0_sequence: Vec<f64>,
    pub extrapolated: f64,
    /// Infimum of the potential on the outer quarter of the longest truncation.
    pub potential_limit: f64,
    pub target: f64,
    pub comparison: Comparison,
    pub spread: f64,
    pub monotone: bool,
    pub disagreement: bool,
    pub verdict: Verdict,
    pub note: String,
}

impl SpectrumReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("T,lambda0\n");
        for (t, l) in self.t_sequence.iter().zip(&self.lambda0_sequence) {
            s.push_str(&format!("{t},{l}\n"));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}

/// Least-squares fit of `values` against `basis(T)`; returns the constant term.
fn fit_constant(ts: &[f64], values: &[f64], powers: &[i32]) -> f64 {
    let a = DMatrix::from_fn(ts.len(), powers.len(), |i, j| ts[i].powi(-powers[j]));
    let b = DVector::from_column_slice(values);
    let svd = a.svd(true, true);
    let x = svd.solve(&b, 1e-14).expect("full SVD");
    x[0]
}

/// Extrapolation on `{1, T⁻², T⁻³}` and its spread against the two-term
/// fit through the last two lengths.
pub fn extrapolate(ts: &[f64], values: &[f64]) -> (f64, f64) {
    let full = fit_constant(ts, values, &[0, 2, 3]);
    let k = ts.len();
    let short = fit_constant(&ts[k - 2..], &values[k - 2..], &[0, 2]);
    (full, (full - short).abs())
}

fn potential_tail(end: &WarpedEnd, t_max: f64, h: f64) -> f64 {
    let n = ((0.25 * t_max / h).round() as usize).max(1);
    (0..=n)
        .map(|i| end.potential(0.75 * t_max + 0.25 * t_max * i as f64 / n as f64))
        .fold(f64::INFINITY, f64::min)
}

fn check_sequence(ts: &[f64]) -> Result<(), SpectralError> {
    if ts.len() < 3 {
        return Err(SpectralError::Sequence(format!(
            "need at least 3 lengths, got {}",
            ts.len()
        )));
    }
    if ts.iter().any(|t| !(*t > 0.0)) || ts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SpectralError::Sequence(
            "lengths must be positive and increasing".into(),
        ));
    }
    Ok(())
}

/// Dirichlet ground states on `[0, T_j]`, extrapolated in `T`.
pub fn ess_bottom(end: &WarpedEnd, params: &EssParams) -> Result<SpectrumReport, SpectralError> {
    check_sequence(&params.t_sequence)?;
    let lambdas = params
        .t_sequence
        .iter()
        .map(|&t| radial_reduce(end, t, params.h).map(|op| eigen_bottom(&op)))
        .collect::<Result<Vec<_>, _>>()?;
    let (extrapolated, spread) = extrapolate(&params.t_sequence, &lambdas);
    let monotone = lambdas.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    let t_max = *params.t_sequence.last().unwrap();
    let potential_limit = potential_tail(end, t_max, params.h);
    let target = tables::delta0(2, 1)?;
    let comparison = if end.mode == 0 {
        Comparison::Equal
    } else {
        Comparison::AtLeast
    };
    let disagreement = !((extrapolated - potential_limit).abs() <= params.disagreement);
    let verdict = judge(
        extrapolated,
        target,
        comparison,
        spread,
        monotone,
        params.tolerance,
    );
    Ok(SpectrumReport {
        end: end.kind,
        n: end.mode,
        t_sequence: params.t_sequence.clone(),
        lambda0_sequence: lambdas,
        extrapolated,
        potential_limit,
        target,
        comparison,
        spread,
        monotone,
        disagreement,
        verdict,
        note: NOTE.into(),
    })
}

fn judge(
    estimate: f64,
    target: f64,
    cmp: Comparison,
    spread: f64,
    monotone: bool,
    tol: f64,
) -> Verdict {
    if !monotone || !(spread <= tol) {
        return Verdict::Inconclusive;
    }
    let ok = match cmp {
        Comparison::Equal => (estimate - target).abs() <= tol,
        Comparison::AtLeast => estimate >= target - tol,
    };
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Ends of a model surface; the core is represented only by its role in
/// the bracketing argument.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDescriptor {
    pub ends: Vec<EndKind>,
    #[serde(default)]
    pub modes: Vec<i64>,
}

impl SurfaceDescriptor {
    pub fn parse<S: AsRef<str>>(ends: &[S]) -> Result<Self, SpectralError> {
        let ends = ends
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SurfaceDescriptor {
            ends,
            modes: vec![0],
        })
    }

    /// Funnels and cylinders have infinite area.
    pub fn infinite_volume(&self) -> bool {
        self.ends
            .iter()
            .any(|e| matches!(e, EndKind::Funnel | EndKind::Cylinder))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub ends: Vec<SpectrumReport>,
    pub estimate: f64,
    pub infinite_volume: bool,
    pub target: f64,
    pub comparison: Comparison,
    pub verdict: Verdict,
    pub note: String,
}

/// Minimum over ends (and requested modes) of the extrapolated bottoms.
pub fn surface_experiment(
    desc: &SurfaceDescriptor,
    params: &EssParams,
) -> Result<SurfaceReport, SpectralError> {
    if desc.ends.is_empty() {
        return Err(SpectralError::Sequence(
            "surface needs at least one end".into(),
        ));
    }
    let modes: &[i64] = if desc.modes.is_empty() {
        &[0]
    } else {
        &desc.modes
    };
    let mut ends = Vec::new();
    for &kind in &desc.ends {
        for &n in modes {
            ends.push(ess_bottom(&WarpedEnd::new(kind, n), params)?);
        }
    }
    let estimate = ends
        .iter()
        .map(|r| r.extrapolated)
        .fold(f64::INFINITY, f64::min);
    let target = tables::delta0(2, 1)?;
    let infinite_volume = desc.infinite_volume();
    let comparison = if infinite_volume {
        Comparison::Equal
    } else {
        Comparison::AtLeast
    };
    let spread = ends.iter().map(|r| r.spread).fold(0.0, f64::max);
    let monotone = ends.iter().all(|r| r.monotone);
    let verdict = judge(
        estimate,
        target,
        comparison,
        spread,
        monotone,
        params.tolerance,
    );
    Ok(SurfaceReport {
        ends,
        estimate,
        infinite_volume,
        target,
        comparison,
        verdict,
        note: NOTE.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn coarse() -> EssParams {
        EssParams {
            h: 1e-2,
            ..EssParams::default()
        }
    }

    #[test]
    fn extrapolation_is_exact_on_the_model() {
        let ts = [10.0, 20.0, 30.0, 40.0];
        let v: Vec<f64> = ts
            .iter()
            .map(|t: &f64| 0.25 + 3.0 / (t * t) - 2.0 / t.powi(3))
            .collect();
        let (x, _) = extrapolate(&ts, &v);
        assert!((x - 0.25).abs() < 1e-12);
    }

    #[test]
    fn cusp_sequence_is_shifted_box() {
        let r = ess_bottom(&WarpedEnd::new(EndKind::Cusp, 0), &coarse()).unwrap();
        for (t, l) in r.t_sequence.iter().zip(&r.lambda0_sequence) {
            assert!((l - 0.25 - PI * PI / (t * t)).abs() < 1e-5);
        }
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.monotone && !r.disagreement);
        assert!((r.potential_limit - 0.25).abs() < 1e-15);
    }

    #[test]
    fn funnel_bottom() {
        let r = ess_bottom(&WarpedEnd::new(EndKind::Funnel, 0), &coarse()).unwrap();
        assert!((r.extrapolated - 0.25).abs() < 1e-3, "{}", r.extrapolated);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn channels_are_ordered() {
        let p = coarse();
        for kind in [EndKind::Funnel, EndKind::Cusp, EndKind::Cylinder] {
            let l: Vec<f64> = (0..3)
                .map(|n| {
                    ess_bottom(&WarpedEnd::new(kind, n), &p)
                        .unwrap()
                        .lambda0_sequence[1]
                })
                .collect();
            assert!(l.windows(2).all(|w| w[1] >= w[0]), "{kind}: {l:?}");
        }
        let cusp1 = ess_bottom(&WarpedEnd::new(EndKind::Cusp, 1), &p).unwrap();
        assert!(cusp1.extrapolated > 0.25 && cusp1.disagreement);
        assert_eq!(cusp1.comparison, Comparison::AtLeast);
    }

    #[test]
    fn sequence_requirements() {
        let end = WarpedEnd::new(EndKind::Cusp, 0);
        let short = EssParams {
            t_sequence: vec![10.0, 20.0],
            ..coarse()
        };
        assert!(matches!(
            ess_bottom(&end, &short),
            Err(SpectralError::Sequence(_))
        ));
        let unsorted = EssParams {
            t_sequence: vec![10.0, 30.0, 20.0],
            ..coarse()
        };
        assert!(ess_bottom(&end, &unsorted).is_err());
        assert!(SurfaceDescriptor::parse(&["cusp", "horn"]).is_err());
    }

    #[test]
    fn surfaces() {
        let p = coarse();
        let cyl =
            surface_experiment(&SurfaceDescriptor::parse(&["cylinder"]).unwrap(), &p).unwrap();
        assert!(cyl.infinite_volume && cyl.verdict == Verdict::Pass);
        let cusp = surface_experiment(&SurfaceDescriptor::parse(&["cusp"]).unwrap(), &p).unwrap();
        assert!(!cusp.infinite_volume && cusp.estimate >= 0.249);
        let csv = cyl.ends[0].to_csv();
        assert!(csv.starts_with("T,lambda0\n10,"));
        let json = serde_json::to_value(&cyl.ends[0]).unwrap();
        for key in [
            "end",
            "n",
            "T_sequence",
            "lambda0_sequence",
            "extrapolated",
            "target",
            "verdict",
        ] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}
