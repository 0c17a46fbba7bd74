use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Tier of the satellite hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    Mist,
    EdgeDc,
    Cloud,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::Mist, Layer::EdgeDc, Layer::Cloud];

    pub fn index(self) -> usize {
        match self {
            Layer::Mist => 0,
            Layer::EdgeDc => 1,
            Layer::Cloud => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Layer::Mist => "mist",
            Layer::EdgeDc => "edge_dc",
            Layer::Cloud => "cloud",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Layer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "mist" => Ok(Layer::Mist),
            "edge_dc" | "edge" => Ok(Layer::EdgeDc),
            "cloud" => Ok(Layer::Cloud),
            other => Err(Error::Config(format!("unknown layer `{other}`"))),
        }
    }
}

/// Fixed-size table indexed by [`Layer`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerLayer<T>(pub [T; 3]);

impl<T> PerLayer<T> {
    pub fn new(mist: T, edge_dc: T, cloud: T) -> Self {
        PerLayer([mist, edge_dc, cloud])
    }

    pub fn get(&self, layer: Layer) -> &T {
        &self.0[layer.index()]
    }

    pub fn get_mut(&mut self, layer: Layer) -> &mut T {
        &mut self.0[layer.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Layer, &T)> {
        Layer::ALL.into_iter().zip(self.0.iter())
    }
}

impl<T> std::ops::Index<Layer> for PerLayer<T> {
    type Output = T;
    fn index(&self, layer: Layer) -> &T {
        self.get(layer)
    }
}

impl<T> std::ops::IndexMut<Layer> for PerLayer<T> {
    fn index_mut(&mut self, layer: Layer) -> &mut T {
        self.get_mut(layer)
    }
}

/// Set of layers enabled for orchestration ("architecture").
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerMask(u8);

impl LayerMask {
    pub const ALL: LayerMask = LayerMask(0b111);
    pub const NONE: LayerMask = LayerMask(0);

    pub fn only(layer: Layer) -> Self {
        LayerMask(1 << layer.index())
    }

    pub fn with(self, layer: Layer) -> Self {
        LayerMask(self.0 | (1 << layer.index()))
    }

    pub fn contains(self, layer: Layer) -> bool {
        self.0 & (1 << layer.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl Default for LayerMask {
    fn default() -> Self {
        LayerMask::ALL
    }
}

impl fmt::Display for LayerMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = Layer::ALL
            .into_iter()
            .filter(|l| self.contains(*l))
            .map(Layer::name)
            .collect();
        f.write_str(&names.join(","))
    }
}

impl FromStr for LayerMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut mask = LayerMask::NONE;
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            mask = mask.with(part.parse()?);
        }
        if mask.is_empty() {
            return Err(Error::Config("architecture enables no layer".into()));
        }
        Ok(mask)
    }
}
