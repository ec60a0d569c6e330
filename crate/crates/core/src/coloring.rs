//! Color sets, multicolorings, and the slack parameter ε.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::NodeId;

/// A color; palettes are `[1, k]`.
pub type Color = u64;

/// Sorted, duplicate-free set of colors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Color>", into = "Vec<Color>")]
pub struct ColorSet(Vec<Color>);

impl ColorSet {
    pub fn new() -> Self {
        ColorSet(Vec::new())
    }

    /// The full palette `[1, k]`.
    pub fn full(k: u64) -> Self {
        ColorSet((1..=k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, c: Color) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn max(&self) -> Option<Color> {
        self.0.last().copied()
    }

    /// Number of colors present in both sets.
    pub fn intersection_len(&self, other: &ColorSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn is_superset(&self, other: &ColorSet) -> bool {
        self.intersection_len(other) == other.len()
    }
}

impl From<Vec<Color>> for ColorSet {
    fn from(mut v: Vec<Color>) -> Self {
        v.sort_unstable();
        v.dedup();
        ColorSet(v)
    }
}

impl From<ColorSet> for Vec<Color> {
    fn from(s: ColorSet) -> Self {
        s.0
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        ColorSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

const EPS_SCALE: u128 = 1_000_000;

/// The slack ε in `[0, 1]`, held exactly in millionths so that guarantee
/// checks are integer comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Epsilon {
    millionths: u32,
}

impl Epsilon {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(invalid(format!("epsilon {value} not in [0, 1]")));
        }
        Ok(Epsilon {
            millionths: (value * EPS_SCALE as f64).round() as u32,
        })
    }

    /// Like [`Epsilon::new`] but also rejects zero.
    pub fn positive(value: f64) -> Result<Self> {
        let e = Self::new(value)?;
        if e.millionths == 0 {
            return Err(invalid("epsilon must be positive"));
        }
        Ok(e)
    }

    pub fn value(self) -> f64 {
        self.millionths as f64 / EPS_SCALE as f64
    }

    /// `⌈(1-ε)·k/(δ+1)⌉`, exactly.
    pub fn min_colors(self, k: u64, degree: usize) -> u64 {
        let num = (EPS_SCALE - self.millionths as u128) * k as u128;
        let den = EPS_SCALE * (degree as u128 + 1);
        num.div_ceil(den) as u64
    }

    /// Whether `count` colors out of `k` reach `(1-ε)/(δ+1)`.
    pub fn meets(self, count: u64, k: u64, degree: usize) -> bool {
        count >= self.min_colors(k, degree)
    }
}

impl TryFrom<f64> for Epsilon {
    type Error = crate::Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Epsilon> for f64 {
    fn from(e: Epsilon) -> f64 {
        e.value()
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Where a coloring came from; enough to reproduce it given the graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub algorithm: String,
    pub epsilon: Option<f64>,
    pub seed: u64,
    pub max_degree: usize,
    pub id_space: u64,
    pub n: usize,
    /// Algorithm-specific settings (palette construction, tie policy, ...).
    #[serde(default)]
    pub details: serde_json::Value,
    pub version: String,
}

/// Color sets per node over the palette `[1, palette_size]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Multicoloring {
    pub palette_size: u64,
    pub assignment: BTreeMap<NodeId, ColorSet>,
    pub params: RunParams,
}

impl Multicoloring {
    pub fn colors_of(&self, id: NodeId) -> Option<&ColorSet> {
        self.assignment.get(&id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
