use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::front;
use super::transform::{b_flat, deceptive_centre, s_decept, TRANSFORM_B, TRANSFORM_C};
use super::vector::{Bounds, DecisionVector, ObjectiveVector};
use super::{DmopType, DynamicProblem};
use crate::error::{Error, Result};

/// The twelve dynamic benchmark functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "FDA4")]
    Fda4,
    #[serde(rename = "FDA5")]
    Fda5,
    #[serde(rename = "FDA5_iso")]
    Fda5Iso,
    #[serde(rename = "FDA5_dec")]
    Fda5Dec,
    #[serde(rename = "DIMP2")]
    Dimp2,
    #[serde(rename = "DMOP2")]
    Dmop2,
    #[serde(rename = "DMOP2_iso")]
    Dmop2Iso,
    #[serde(rename = "DMOP2_dec")]
    Dmop2Dec,
    #[serde(rename = "DMOP3")]
    Dmop3,
    #[serde(rename = "HE2")]
    He2,
    #[serde(rename = "HE7")]
    He7,
    #[serde(rename = "HE9")]
    He9,
}

/// Static description of one benchmark: `(name, n, M, type)` plus its box.
#[derive(Debug, Clone, Copy)]
struct Spec {
    name: &'static str,
    n: usize,
    m: usize,
    dmop_type: DmopType,
    /// Leading dimensions with their own range, followed by the tail range.
    head: usize,
    head_range: (f64, f64),
    tail_range: (f64, f64),
}

const UNIT: (f64, f64) = (0.0, 1.0);
const SYM: (f64, f64) = (-1.0, 1.0);

impl ProblemKind {
    /// Registry order; reports list problems in this order.
    pub const ALL: [ProblemKind; 12] = [
        ProblemKind::Fda4,
        ProblemKind::Fda5,
        ProblemKind::Fda5Iso,
        ProblemKind::Fda5Dec,
        ProblemKind::Dimp2,
        ProblemKind::Dmop2,
        ProblemKind::Dmop2Iso,
        ProblemKind::Dmop2Dec,
        ProblemKind::Dmop3,
        ProblemKind::He2,
        ProblemKind::He7,
        ProblemKind::He9,
    ];

    const fn spec(self) -> Spec {
        use DmopType::*;
        use ProblemKind::*;
        let (name, n, m, dmop_type, head, head_range, tail_range) = match self {
            Fda4 => ("FDA4", 12, 3, TypeI, 12, UNIT, UNIT),
            Fda5 => ("FDA5", 12, 3, TypeII, 12, UNIT, UNIT),
            Fda5Iso => ("FDA5_iso", 12, 3, TypeII, 12, UNIT, UNIT),
            Fda5Dec => ("FDA5_dec", 12, 3, TypeII, 12, UNIT, UNIT),
            Dimp2 => ("DIMP2", 10, 2, TypeI, 1, UNIT, (-2.0, 2.0)),
            Dmop2 => ("DMOP2", 10, 2, TypeII, 1, UNIT, SYM),
            Dmop2Iso => ("DMOP2_iso", 10, 2, TypeII, 10, UNIT, UNIT),
            Dmop2Dec => ("DMOP2_dec", 10, 2, TypeII, 10, UNIT, UNIT),
            Dmop3 => ("DMOP3", 10, 2, TypeI, 10, SYM, SYM),
            He2 => ("HE2", 30, 2, TypeIII, 30, UNIT, UNIT),
            He7 => ("HE7", 10, 2, TypeIII, 1, UNIT, SYM),
            He9 => ("HE9", 10, 2, TypeIII, 1, UNIT, SYM),
        };
        Spec {
            name,
            n,
            m,
            dmop_type,
            head,
            head_range,
            tail_range,
        }
    }

    pub fn name(self) -> &'static str {
        self.spec().name
    }

    pub fn dimension(self) -> usize {
        self.spec().n
    }

    pub fn objectives(self) -> usize {
        self.spec().m
    }

    pub fn dmop_type(self) -> DmopType {
        self.spec().dmop_type
    }

    pub fn bounds(self) -> Bounds {
        let s = self.spec();
        Bounds::split(s.n, s.head, s.head_range, s.tail_range)
    }

    /// `(A, B, C)` of the bias transformation used by the `iso`/`dec` variants at
    /// time `t`; `None` for the other problems.
    pub fn transform_parameters(self, t: f64) -> Option<(f64, f64, f64)> {
        use ProblemKind::*;
        match self {
            Fda5Iso | Fda5Dec => Some((fda_g(t), TRANSFORM_B, TRANSFORM_C)),
            Dmop2Iso | Dmop2Dec => Some((dmop_g(t).abs(), TRANSFORM_B, TRANSFORM_C)),
            _ => None,
        }
    }

    pub fn position_of_change_variable(self, t: f64) -> Option<usize> {
        (self == ProblemKind::Dmop3).then(|| dmop3_position(t, self.dimension()))
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config("problem", format!("unknown problem `{s}`")))
    }
}

/// One of the registered benchmark problems.
#[derive(Debug, Clone)]
pub struct Benchmark {
    kind: ProblemKind,
    bounds: Bounds,
}

impl Benchmark {
    pub fn new(kind: ProblemKind) -> Self {
        Self {
            kind,
            bounds: kind.bounds(),
        }
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Objective values without the bounds check.
    pub(crate) fn compute(&self, x: &[f64], t: f64) -> Vec<f64> {
        use ProblemKind::*;
        match self.kind {
            Fda4 => {
                let g_t = fda_g(t);
                let g: f64 = x[2..].iter().map(|v| (v - g_t).powi(2)).sum();
                sphere3(1.0 + g, x[0], x[1])
            }
            Fda5 | Fda5Iso | Fda5Dec => {
                let g_t = fda_g(t);
                let exponent = 1.0 + 100.0 * (0.5 * PI * t).sin().powi(4);
                let dist: f64 = match self.kind {
                    Fda5 => x[2..].iter().map(|v| (v - g_t).powi(2)).sum(),
                    Fda5Iso => x[2..]
                        .iter()
                        .map(|v| (b_flat(*v, g_t, TRANSFORM_B, TRANSFORM_C) - g_t).powi(2))
                        .sum(),
                    _ => {
                        let a = deceptive_centre(g_t);
                        x[2..]
                            .iter()
                            .map(|v| s_decept(*v, a, TRANSFORM_B, TRANSFORM_C).powi(2))
                            .sum()
                    }
                };
                let g = g_t + dist;
                sphere3(1.0 + g, x[0].powf(exponent), x[1].powf(exponent))
            }
            Dimp2 => {
                let n = x.len();
                let mut g = 1.0 + 2.0 * (n as f64 - 1.0);
                for (i, v) in x.iter().enumerate().skip(1) {
                    let gi = (0.5 * PI * t + 2.0 * PI * ((i + 1) as f64 / (n + 1) as f64))
                        .sin()
                        .powi(2);
                    let d = v - gi;
                    g += d * d - 2.0 * (3.0 * PI * d).cos();
                }
                let f1 = x[0];
                vec![f1, g * (1.0 - (f1 / g).sqrt())]
            }
            Dmop2 | Dmop2Iso | Dmop2Dec => {
                let g_t = dmop_g(t);
                let h = dmop_h(t);
                let dist: f64 = match self.kind {
                    Dmop2 => x[1..].iter().map(|v| (v - g_t).powi(2)).sum(),
                    Dmop2Iso => {
                        let a = g_t.abs();
                        x[1..]
                            .iter()
                            .map(|v| (b_flat(*v, a, TRANSFORM_B, TRANSFORM_C) - a).powi(2))
                            .sum()
                    }
                    _ => {
                        let a = deceptive_centre(g_t);
                        x[1..]
                            .iter()
                            .map(|v| s_decept(*v, a, TRANSFORM_B, TRANSFORM_C).powi(2))
                            .sum()
                    }
                };
                let g = 1.0 + dist;
                let f1 = x[0];
                vec![f1, g * (1.0 - (f1 / g).powf(h))]
            }
            Dmop3 => {
                let r = dmop3_position(t, x.len());
                let g_t = dmop_g(t);
                let g = 1.0
                    + x.iter()
                        .enumerate()
                        .filter(|(i, _)| *i != r)
                        .map(|(_, v)| (v - g_t).powi(2))
                        .sum::<f64>();
                let f1 = x[r].abs();
                vec![f1, g * (1.0 - (f1 / g).sqrt())]
            }
            He2 => {
                let n = x.len() as f64;
                let h = dmop_h(t);
                let g = 1.0 + 9.0 / (n - 1.0) * x[1..].iter().sum::<f64>();
                let f1 = x[0];
                let ratio = f1 / g;
                vec![
                    f1,
                    g * (1.0 - ratio.powf(0.5 * h) - ratio.powf(h) * (10.0 * PI * f1).sin()),
                ]
            }
            He7 | He9 => {
                let n = x.len();
                let x1 = x[0];
                let h = dmop_h(t);
                let (mut odd_sum, mut odd_count) = (0.0, 0usize);
                let (mut even_sum, mut even_count) = (0.0, 0usize);
                for (idx, v) in x.iter().enumerate().skip(1) {
                    let j = (idx + 1) as f64;
                    let phase = 6.0 * PI * x1 + j * PI / n as f64;
                    let odd = (idx + 1) % 2 == 1;
                    let target = if self.kind == He7 {
                        let amp = 0.3 * x1 * x1 * (24.0 * PI * x1 + 4.0 * j * PI / n as f64).cos() + 0.6 * x1;
                        if odd {
                            amp * phase.cos()
                        } else {
                            amp * phase.sin()
                        }
                    } else {
                        phase.sin()
                    };
                    let d = (v - target).powi(2);
                    if odd {
                        odd_sum += d;
                        odd_count += 1;
                    } else {
                        even_sum += d;
                        even_count += 1;
                    }
                }
                let f1 = x1 + 2.0 * odd_sum / odd_count.max(1) as f64;
                let base = if self.kind == He7 {
                    2.0 - x1.sqrt()
                } else {
                    2.0 - x1 * x1
                };
                let g = base + 2.0 * even_sum / even_count.max(1) as f64;
                vec![f1, g * (1.0 - (f1 / g).powf(h))]
            }
        }
    }
}

impl DynamicProblem for Benchmark {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn dimension(&self) -> usize {
        self.kind.dimension()
    }

    fn objectives(&self) -> usize {
        self.kind.objectives()
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn dmop_type(&self) -> DmopType {
        self.kind.dmop_type()
    }

    fn evaluate(&self, x: &DecisionVector, t: f64) -> Result<ObjectiveVector> {
        if !self.bounds.contains(x) {
            return Err(Error::Domain(format!(
                "{}: expected {} components within bounds",
                self.name(),
                self.dimension()
            )));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::arg(format!(
                "time must be finite and nonnegative, got {t}"
            )));
        }
        let f = self.compute(x, t);
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::Internal(format!(
                "{} produced a non-finite objective at t={t}",
                self.name()
            )));
        }
        Ok(ObjectiveVector(f))
    }

    fn true_pof(&self, t: f64, k: usize) -> Result<Vec<ObjectiveVector>> {
        front::true_front(self.kind, t, k)
    }
}

/// `G(t) = |sin(0.5 pi t)|` of the FDA family.
pub(crate) fn fda_g(t: f64) -> f64 {
    (0.5 * PI * t).sin().abs()
}

/// `G(t) = sin(0.5 pi t)` of the DMOP family.
pub(crate) fn dmop_g(t: f64) -> f64 {
    (0.5 * PI * t).sin()
}

/// `H(t) = 0.75 sin(0.5 pi t) + 1.25`, shared by DMOP2 and the HE problems.
pub(crate) fn dmop_h(t: f64) -> f64 {
    0.75 * (0.5 * PI * t).sin() + 1.25
}

/// 3-objective spherical shape with radius `r` and angle parameters in `[0, 1]`.
pub(crate) fn sphere3(r: f64, u: f64, v: f64) -> Vec<f64> {
    let (cu, su) = ((0.5 * PI * u).cos(), (0.5 * PI * u).sin());
    let (cv, sv) = ((0.5 * PI * v).cos(), (0.5 * PI * v).sin());
    vec![r * cu * cv, r * cu * sv, r * su]
}

/// DMOP3 picks a fresh position variable in each environment. The choice is a
/// hash of `t` so that evaluation stays a pure function of `(x, t)`.
fn dmop3_position(t: f64, n: usize) -> usize {
    let mut z = t.to_bits().wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z % n as u64) as usize
}
