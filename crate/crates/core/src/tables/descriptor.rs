use std::fmt;

use serde::{Deserialize, Serialize};

use super::TableError;

/// Closed interval `[lo, hi]`; `hi` may be `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "extended")]
    pub lo: f64,
    #[serde(with = "extended")]
    pub hi: f64,
}

mod extended {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Ext {
        Finite(f64),
        Tag(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            Ext::Tag(if *v > 0.0 { "inf" } else { "-inf" }.into()).serialize(s)
        } else {
            Ext::Finite(*v).serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Ext::deserialize(d)? {
            Ext::Finite(v) => Ok(v),
            Ext::Tag(t) if t == "inf" => Ok(f64::INFINITY),
            Ext::Tag(t) if t == "-inf" => Ok(f64::NEG_INFINITY),
            Ext::Tag(t) => Err(serde::de::Error::custom(format!("bad bound {t}"))),
        }
    }
}

/// Subset of the real line made of sorted disjoint closed intervals and
/// isolated points outside them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDescriptor {
    intervals: Vec<Interval>,
    points: Vec<f64>,
}

impl SpectrumDescriptor {
    pub fn new(mut intervals: Vec<Interval>, mut points: Vec<f64>) -> Result<Self, TableError> {
        for iv in &intervals {
            if iv.lo.is_nan() || iv.hi.is_nan() || iv.lo > iv.hi {
                return Err(TableError::Descriptor(format!(
                    "bad interval [{}, {}]",
                    iv.lo, iv.hi
                )));
            }
        }
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for w in intervals.windows(2) {
            if w[1].lo <= w[0].hi {
                return Err(TableError::Descriptor("intervals overlap".into()));
            }
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        for &p in &points {
            if !p.is_finite() {
                return Err(TableError::Descriptor(format!("isolated point {p}")));
            }
            if intervals.iter().any(|iv| iv.lo <= p && p <= iv.hi) {
                return Err(TableError::Descriptor(format!(
                    "point {p} lies in an interval"
                )));
            }
        }
        Ok(SpectrumDescriptor { intervals, points })
    }

    pub fn empty() -> Self {
        SpectrumDescriptor {
            intervals: vec![],
            points: vec![],
        }
    }

    pub fn real_line() -> Self {
        SpectrumDescriptor {
            intervals: vec![Interval {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            }],
            points: vec![],
        }
    }

    /// `[bottom, ∞)`, optionally with the isolated point 0 below it.
    pub fn half_line(bottom: f64, with_zero: bool) -> Self {
        let points = if with_zero && bottom > 0.0 {
            vec![0.0]
        } else {
            vec![]
        };
        SpectrumDescriptor {
            intervals: vec![Interval {
                lo: bottom,
                hi: f64::INFINITY,
            }],
            points,
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.points.is_empty()
    }

    /// Lower end of the unbounded interval, if there is one.
    pub fn half_line_bottom(&self) -> Option<f64> {
        self.intervals
            .iter()
            .find(|iv| iv.hi == f64::INFINITY)
            .map(|iv| iv.lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.points.contains(&x) || self.intervals.iter().any(|iv| iv.lo <= x && x <= iv.hi)
    }
}

fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "∞".into()
    } else if x == f64::NEG_INFINITY {
        "-∞".into()
    } else {
        format!("{x}")
    }
}

impl fmt::Display for SpectrumDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        if self.points.is_empty()
            && self.intervals.len() == 1
            && self.intervals[0].lo == f64::NEG_INFINITY
            && self.intervals[0].hi == f64::INFINITY
        {
            return write!(f, "ℝ");
        }
        let mut parts: Vec<String> = Vec::new();
        if !self.points.is_empty() {
            let pts: Vec<String> = self.points.iter().map(|&p| num(p)).collect();
            parts.push(format!("{{{}}}", pts.join(",")));
        }
        for iv in &self.intervals {
            let open_lo = if iv.lo.is_infinite() { "(" } else { "[" };
            let close = if iv.hi.is_infinite() { ")" } else { "]" };
            parts.push(format!("{open_lo}{},{}{close}", num(iv.lo), num(iv.hi)));
        }
        write!(f, "{}", parts.join("∪"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(
            SpectrumDescriptor::half_line(0.25, true).to_string(),
            "{0}∪[0.25,∞)"
        );
        assert_eq!(
            SpectrumDescriptor::half_line(4.0, false).to_string(),
            "[4,∞)"
        );
        assert_eq!(SpectrumDescriptor::empty().to_string(), "∅");
        assert_eq!(SpectrumDescriptor::real_line().to_string(), "ℝ");
    }

    #[test]
    fn rejects_bad_shapes() {
        let iv = |lo, hi| Interval { lo, hi };
        assert!(SpectrumDescriptor::new(vec![iv(0.0, 2.0), iv(1.0, 3.0)], vec![]).is_err());
        assert!(SpectrumDescriptor::new(vec![iv(1.0, f64::INFINITY)], vec![2.0]).is_err());
        let s = SpectrumDescriptor::new(vec![iv(3.0, 4.0), iv(0.0, 1.0)], vec![2.0, 2.0]).unwrap();
        assert_eq!(s.intervals()[0].lo, 0.0);
        assert_eq!(s.points(), &[2.0]);
    }

    #[test]
    fn json_round_trip() {
        let s = SpectrumDescriptor::half_line(1.0, true);
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"inf\""));
        let back: SpectrumDescriptor = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
