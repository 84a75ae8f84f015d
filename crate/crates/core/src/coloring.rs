//! Color assignments and special-vertex sets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddedGraph;
use crate::error::{Error, Result};

/// One of the two colors of a coupon coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::A => Color::B,
            Color::B => Color::A,
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Color::A => write!(f, "a"),
            Color::B => write!(f, "b"),
        }
    }
}

/// Two-coloring of vertices; may be partial while a solve is in progress.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoColoring {
    colors: BTreeMap<usize, Color>,
}

impl TwoColoring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(colors: BTreeMap<usize, Color>) -> Self {
        TwoColoring { colors }
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.colors.get(&v).copied()
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.colors.insert(v, c);
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Color)> + '_ {
        self.colors.iter().map(|(&v, &c)| (v, c))
    }

    pub fn map(&self) -> &BTreeMap<usize, Color> {
        &self.colors
    }

    /// True when every live vertex of `g` is colored.
    pub fn is_total_on(&self, g: &EmbeddedGraph) -> bool {
        g.vertices().all(|v| self.colors.contains_key(&v))
    }

    /// Merge another (disjoint-domain) coloring into this one.
    pub fn absorb(&mut self, other: &TwoColoring) {
        for (v, c) in other.iter() {
            self.colors.insert(v, c);
        }
    }

    /// Swap the two colors on every vertex of this coloring.
    pub fn flip(&mut self) {
        for c in self.colors.values_mut() {
            *c = c.opposite();
        }
    }
}

/// Four-coloring with colors 1..=4.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FourColoring {
    colors: BTreeMap<usize, u8>,
}

impl FourColoring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(colors: BTreeMap<usize, u8>) -> Self {
        FourColoring { colors }
    }

    pub fn get(&self, v: usize) -> Option<u8> {
        self.colors.get(&v).copied()
    }

    pub fn set(&mut self, v: usize, c: u8) {
        debug_assert!((1..=4).contains(&c));
        self.colors.insert(v, c);
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.colors.iter().map(|(&v, &c)| (v, c))
    }

    pub fn map(&self) -> &BTreeMap<usize, u8> {
        &self.colors
    }

    pub fn absorb(&mut self, other: &FourColoring) {
        for (v, c) in other.iter() {
            self.colors.insert(v, c);
        }
    }

    pub fn is_total_on(&self, g: &EmbeddedGraph) -> bool {
        g.vertices().all(|v| self.colors.contains_key(&v))
    }
}

/// The set S of designated 2-vertices that the coloring must satisfy.
/// At most two members; every member has degree exactly two.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecialSet {
    members: Vec<usize>,
}

impl SpecialSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validate membership against a graph.
    pub fn new(mut members: Vec<usize>, g: &EmbeddedGraph) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.len() > 2 {
            return Err(Error::SpecialSetInvalid(format!(
                "{} special vertices given, at most 2 allowed",
                members.len()
            )));
        }
        for &v in &members {
            if !g.is_alive(v) {
                return Err(Error::SpecialSetInvalid(format!("unknown vertex {v}")));
            }
            if g.degree(v) != 2 {
                return Err(Error::SpecialSetInvalid(format!(
                    "vertex {v} has degree {}, special vertices must have degree 2",
                    g.degree(v)
                )));
            }
        }
        Ok(SpecialSet { members })
    }

    /// Construct without graph validation (used internally where membership
    /// is guaranteed by the reduction proofs).
    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) fn from_sorted_unchecked(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        debug_assert!(members.len() <= 2);
        SpecialSet { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }
}
