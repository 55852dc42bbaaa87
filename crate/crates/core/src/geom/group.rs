use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::isometry::{Isometry, IsometryClass};
use super::point::{Ideal, Point};
use super::GeomError;

/// Hard cap on enumerated words, to keep non-elementary inputs at desk scale.
const MAX_WORDS: usize = 200_000;

/// Finitely generated subgroup of PSL(2, ℝ) with a word-ball depth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct GroupPresentation {
    generators: Vec<Isometry>,
    depth: usize,
}

#[derive(Deserialize)]
struct RawPresentation {
    generators: Vec<Isometry>,
    #[serde(default = "default_depth")]
    depth: usize,
}

fn default_depth() -> usize {
    8
}

impl TryFrom<RawPresentation> for GroupPresentation {
    type Error = GeomError;
    fn try_from(raw: RawPresentation) -> Result<Self, Self::Error> {
        GroupPresentation::new(raw.generators, raw.depth)
    }
}

impl GroupPresentation {
    pub fn new(generators: Vec<Isometry>, depth: usize) -> Result<Self, GeomError> {
        if generators.iter().any(|g| g.is_identity(1e-12)) {
            return Err(GeomError::Domain(
                "identity is not allowed as a generator".into(),
            ));
        }
        Ok(GroupPresentation { generators, depth })
    }

    pub fn cyclic(g: Isometry) -> Result<Self, GeomError> {
        GroupPresentation::new(vec![g], default_depth())
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Conjugates every generator by `h`.
    pub fn conjugate_by(&self, h: &Isometry) -> Self {
        GroupPresentation {
            generators: self.generators.iter().map(|g| g.conjugate_by(h)).collect(),
            depth: self.depth,
        }
    }

    /// Whether all generators commute pairwise (up to sign in SL(2, ℝ)).
    pub fn is_abelian(&self, tol: f64) -> bool {
        let gens = &self.generators;
        gens.iter().enumerate().all(|(i, g)| {
            gens[i + 1..].iter().all(|h| {
                let gh = g.compose(h);
                let hg = h.compose(g);
                projectively_close(&gh, &hg, tol)
            })
        })
    }

    /// Distinct non-identity elements of the word ball of radius `depth`.
    pub fn word_ball(&self, depth: usize) -> Result<Vec<Isometry>, GeomError> {
        let mut letters: Vec<Isometry> = Vec::with_capacity(2 * self.generators.len());
        for g in &self.generators {
            letters.push(*g);
            letters.push(g.inverse());
        }
        let mut seen: HashSet<[i64; 4]> = HashSet::new();
        seen.insert(word_key(&Isometry::identity()));
        let mut frontier = vec![Isometry::identity()];
        let mut out = Vec::new();
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &frontier {
                for l in &letters {
                    let nw = w.compose(l);
                    if seen.insert(word_key(&nw)) {
                        next.push(nw);
                        out.push(nw);
                    }
                }
            }
            if out.len() > MAX_WORDS {
                return Err(GeomError::Unsupported(format!(
                    "word ball of depth {depth} exceeds {MAX_WORDS} elements"
                )));
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(out)
    }
}

fn projectively_close(g: &Isometry, h: &Isometry, tol: f64) -> bool {
    let (a, b) = (g.entries(), h.entries());
    let plus = a
        .iter()
        .zip(&b)
        .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs()));
    let minus = a
        .iter()
        .zip(&b)
        .all(|(x, y)| (x + y).abs() <= tol * (1.0 + x.abs()));
    plus || minus
}

/// Hash key of an element of PSL(2, ℝ), with the sign fixed and entries quantized.
fn word_key(g: &Isometry) -> [i64; 4] {
    let e = g.entries();
    let lead = e.iter().copied().find(|v| v.abs() > 1e-9).unwrap_or(1.0);
    let s = lead.signum();
    e.map(|v| (s * v * 1e7).round() as i64)
}

/// Membership in the ε-thin part with the element that realizes it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThinMembership {
    pub member: bool,
    pub witness: Option<Isometry>,
    pub witness_displacement: Option<f64>,
}

/// ε-thin part membership for an elementary (abelian) group.
///
/// `p` is a member when some word of the depth-limited ball moves it by less
/// than `epsilon` and generates an infinite cyclic subgroup.
pub fn thin_part_margin(
    g: &GroupPresentation,
    epsilon: f64,
    p: &Point,
) -> Result<ThinMembership, GeomError> {
    if !(epsilon > 0.0) {
        return Err(GeomError::Domain(format!(
            "epsilon {epsilon} must be positive"
        )));
    }
    if g.generators.is_empty() {
        return Ok(ThinMembership {
            member: false,
            witness: None,
            witness_displacement: None,
        });
    }
    if !g.is_abelian(1e-9) {
        return Err(GeomError::Unsupported(
            "thin parts are only computed for elementary (abelian) groups".into(),
        ));
    }
    let mut best: Option<(Isometry, f64)> = None;
    for w in g.word_ball(g.depth.max(1))? {
        if !matches!(
            w.classify(),
            IsometryClass::Parabolic | IsometryClass::Loxodromic
        ) {
            continue;
        }
        let d = w.displacement(p);
        if d < epsilon && best.is_none_or(|(_, bd)| d < bd) {
            best = Some((w, d));
        }
    }
    Ok(ThinMembership {
        member: best.is_some(),
        witness: best.map(|b| b.0),
        witness_displacement: best.map(|b| b.1),
    })
}

/// Options for [`limit_set_sample_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitSetOptions {
    /// Angular merge tolerance on the boundary circle seen from the base point.
    pub merge_tol: f64,
}

impl Default for LimitSetOptions {
    fn default() -> Self {
        LimitSetOptions { merge_tol: 1e-3 }
    }
}

/// Angle of a boundary point on the circle of the disk model centred at `base`.
pub fn boundary_angle(base: &Point, xi: &Ideal) -> f64 {
    let i = Complex64::i();
    let to_base = Isometry::frame_at(base, std::f64::consts::FRAC_PI_2).inverse();
    match to_base.apply_ideal(xi) {
        Ideal::Infinity => 0.0,
        Ideal::Real(x) => {
            let w = (Complex64::new(x, 0.0) - i) / (Complex64::new(x, 0.0) + i);
            w.im.atan2(w.re)
        }
    }
}

/// Inverse of [`boundary_angle`].
pub fn ideal_from_angle(base: &Point, angle: f64) -> Ideal {
    let i = Complex64::i();
    let w = Complex64::from_polar(1.0, angle);
    let den = 1.0 - w;
    let local = if den.norm() < 1e-15 {
        Ideal::Infinity
    } else {
        Ideal::Real((i * (1.0 + w) / den).re)
    };
    Isometry::frame_at(base, std::f64::consts::FRAC_PI_2).apply_ideal(&local)
}

pub fn limit_set_sample(
    g: &GroupPresentation,
    depth: usize,
    base: &Point,
) -> Result<Vec<Ideal>, GeomError> {
    limit_set_sample_with(g, depth, base, LimitSetOptions::default())
}

/// Clustered sample of the limit set.
///
/// Orbit accumulation directions are represented by the attracting fixed
/// points of the non-elliptic words in the ball; nearby directions are merged.
pub fn limit_set_sample_with(
    g: &GroupPresentation,
    depth: usize,
    base: &Point,
    opts: LimitSetOptions,
) -> Result<Vec<Ideal>, GeomError> {
    if g.generators.is_empty() {
        return Err(GeomError::Empty);
    }
    if depth == 0 {
        return Err(GeomError::Domain("depth must be at least 1".into()));
    }
    let mut angles: Vec<f64> = g
        .word_ball(depth)?
        .iter()
        .filter_map(|w| w.attracting_fixed_point())
        .map(|xi| boundary_angle(base, &xi))
        .collect();
    if angles.is_empty() {
        return Ok(vec![]);
    }
    angles.sort_by(f64::total_cmp);
    let clusters = cluster_circular(&angles, opts.merge_tol);
    Ok(clusters
        .into_iter()
        .map(|a| ideal_from_angle(base, a))
        .collect())
}

/// Single-link clustering of sorted angles in (−π, π]; returns the circular
/// mean of each cluster.
fn cluster_circular(sorted: &[f64], tol: f64) -> Vec<f64> {
    use std::f64::consts::TAU;
    let n = sorted.len();
    let gap = |k: usize| {
        if k + 1 < n {
            sorted[k + 1] - sorted[k]
        } else {
            sorted[0] + TAU - sorted[n - 1]
        }
    };
    // Start after the first gap larger than tol so no cluster straddles the seam.
    let Some(start) = (0..n).find(|&k| gap(k) > tol).map(|k| (k + 1) % n) else {
        let (s, c) = sorted
            .iter()
            .fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
        return vec![s.atan2(c)];
    };
    let mut out = Vec::new();
    let mut acc = (0.0, 0.0);
    for step in 0..n {
        let k = (start + step) % n;
        acc.0 += sorted[k].sin();
        acc.1 += sorted[k].cos();
        if gap(k) > tol {
            out.push(acc.0.atan2(acc.1));
            acc = (0.0, 0.0);
        }
    }
    out
}
