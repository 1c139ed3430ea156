//! Finite patterns and windowed configurations.

use serde::{Deserialize, Serialize};

use super::Sym;
use crate::error::{Error, Result};
use crate::lattice::{Rect, Site};

/// Symbols on a box, row-major (last axis fastest).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    pub rect: Rect,
    pub cells: Vec<Sym>,
}

impl Pattern {
    pub fn new(rect: Rect, cells: Vec<Sym>) -> Result<Self> {
        if rect.len() != cells.len() {
            return Err(Error::Invalid(format!("{} cells for a box of {} sites", cells.len(), rect.len())));
        }
        Ok(Pattern { rect, cells })
    }

    pub fn get(&self, z: &Site) -> Option<Sym> {
        self.rect.index_of(z).map(|i| self.cells[i])
    }

    /// The same cells on a box centred at the origin (odd side lengths).
    pub fn recentre(&self) -> Pattern {
        let shift: Vec<i64> = self.rect.lo.iter().zip(&self.rect.hi).map(|(l, h)| -(l + h) / 2).collect();
        Pattern { rect: self.rect.translate(&Site(shift)), cells: self.cells.clone() }
    }
}

/// How a configuration continues beyond its window.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Extension {
    /// Nothing is known outside the window.
    #[default]
    None,
    /// Periodic with the given period along each axis.
    Periodic { periods: Vec<i64> },
}

/// A configuration known on a finite window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConfigRepr", into = "ConfigRepr")]
pub struct Configuration {
    window: Rect,
    cells: Vec<Sym>,
    extension: Extension,
}

/// JSON layout: explicit origin and shape, cells in row-major order.
#[derive(Serialize, Deserialize)]
struct ConfigRepr {
    origin: Vec<i64>,
    shape: Vec<usize>,
    cells: Vec<Sym>,
    #[serde(default)]
    extension: Extension,
}

impl TryFrom<ConfigRepr> for Configuration {
    type Error = Error;
    fn try_from(r: ConfigRepr) -> Result<Self> {
        if r.origin.len() != r.shape.len() || r.shape.iter().any(|&s| s == 0) {
            return Err(Error::Invalid("origin and shape must agree and be nonempty".into()));
        }
        let hi = r.origin.iter().zip(&r.shape).map(|(o, s)| o + *s as i64 - 1).collect();
        let cfg = Configuration::new(Rect::new(r.origin, hi), r.cells)?;
        cfg.with_extension(r.extension)
    }
}

impl From<Configuration> for ConfigRepr {
    fn from(c: Configuration) -> Self {
        ConfigRepr { origin: c.window.lo.clone(), shape: c.window.shape(), cells: c.cells, extension: c.extension }
    }
}

impl Configuration {
    pub fn new(window: Rect, cells: Vec<Sym>) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::Invalid("empty window".into()));
        }
        if window.len() != cells.len() {
            return Err(Error::Invalid(format!("{} cells for a window of {} sites", cells.len(), window.len())));
        }
        Ok(Configuration { window, cells, extension: Extension::None })
    }

    /// Fill a window from a function of the site.
    pub fn from_fn(window: Rect, f: impl Fn(&Site) -> Sym) -> Self {
        let cells = window.sites().iter().map(f).collect();
        Configuration { window, cells, extension: Extension::None }
    }

    /// Attach an extension rule, checking periodic consistency inside the window.
    pub fn with_extension(mut self, extension: Extension) -> Result<Self> {
        if let Extension::Periodic { periods } = &extension {
            if periods.len() != self.dim() || periods.iter().any(|&p| p <= 0) {
                return Err(Error::Invalid("one positive period per axis".into()));
            }
            for (d, &p) in periods.iter().enumerate() {
                if p > self.window.shape()[d] as i64 {
                    return Err(Error::Invalid(format!("period {p} exceeds the window along axis {d}")));
                }
            }
            for z in self.window.sites() {
                for (d, &p) in periods.iter().enumerate() {
                    let w = z.step(d, p);
                    if let Some(other) = self.window.index_of(&w) {
                        if self.cells[other] != self.cells[self.window.index_of(&z).unwrap()] {
                            return Err(Error::Invalid(format!("cells at {z} and {w} break the period")));
                        }
                    }
                }
            }
        }
        self.extension = extension;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn window(&self) -> &Rect {
        &self.window
    }

    pub fn cells(&self) -> &[Sym] {
        &self.cells
    }

    pub fn extension(&self) -> &Extension {
        &self.extension
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.extension, Extension::Periodic { .. })
    }

    /// The symbol at `z`, using the extension outside the window.
    pub fn get(&self, z: &Site) -> Option<Sym> {
        if let Some(i) = self.window.index_of(z) {
            return Some(self.cells[i]);
        }
        match &self.extension {
            Extension::None => None,
            Extension::Periodic { periods } => {
                let w = Site(
                    z.0.iter()
                        .zip(&self.window.lo)
                        .zip(periods)
                        .map(|((x, lo), p)| lo + (x - lo).rem_euclid(*p))
                        .collect(),
                );
                self.window.index_of(&w).map(|i| self.cells[i])
            }
        }
    }

    pub fn set(&mut self, z: &Site, s: Sym) -> Result<()> {
        let i = self.window.index_of(z).ok_or_else(|| Error::OutOfWindow(z.to_string()))?;
        self.cells[i] = s;
        Ok(())
    }

    /// The configuration restricted to a sub-box (extension dropped).
    pub fn crop(&self, rect: &Rect) -> Result<Configuration> {
        let rect = if self.is_periodic() { rect.clone() } else { rect.intersect(&self.window) };
        if rect.is_empty() {
            return Err(Error::WindowTooSmall("crop is empty".into()));
        }
        let cells: Option<Vec<Sym>> = rect.sites().iter().map(|z| self.get(z)).collect();
        Configuration::new(rect, cells.ok_or_else(|| Error::OutOfWindow("crop leaves the known cells".into()))?)
    }

    /// `sigma^v`: the configuration `b` with `b_z = a_{z+v}`.
    pub fn shift(&self, v: &Site) -> Configuration {
        Configuration { window: self.window.translate(&v.neg()), cells: self.cells.clone(), extension: self.extension.clone() }
    }

    /// Sites whose ball of radius `r` is known.
    pub fn interior(&self, r: usize) -> Rect {
        if self.is_periodic() {
            self.window.clone()
        } else {
            self.window.shrink(r as i64)
        }
    }

    /// Largest `r` with `B(z, r)` known, capped at `cap` for periodic configurations.
    pub fn known_radius(&self, z: &Site, cap: usize) -> Option<usize> {
        if self.is_periodic() {
            return Some(cap);
        }
        if !self.window.contains(z) {
            return None;
        }
        let m = (0..self.dim())
            .map(|d| (z.0[d] - self.window.lo[d]).min(self.window.hi[d] - z.0[d]))
            .min()
            .unwrap();
        Some(m as usize)
    }

    /// Render a 2D configuration, north at the top, with one character per symbol.
    pub fn render(&self, glyph: impl Fn(Sym) -> char) -> String {
        let w = &self.window;
        if w.dim() != 2 {
            return format!("<{}-dimensional configuration on {:?}..{:?}>", w.dim(), w.lo, w.hi);
        }
        let mut s = String::new();
        for y in (w.lo[1]..=w.hi[1]).rev() {
            for x in w.lo[0]..=w.hi[0] {
                s.push(glyph(self.get(&Site(vec![x, y])).unwrap()));
            }
            s.push('\n');
        }
        s
    }
}
