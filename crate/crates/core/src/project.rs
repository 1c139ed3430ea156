//! Project files: a shift with its cocycles, automata, configurations and
//! analysis parameters in one JSON document, plus the bundled fixtures.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::automaton::CaRule;
use crate::cocycles::{CocycleRule, EquivariantCochainRule};
use crate::defects::TiltOptions;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::lattice::{Rect, Site};
use crate::symbolic::{Configuration, SftSpec, Sym};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedConfiguration {
    pub name: String,
    pub configuration: Configuration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisParams {
    /// Range `r` of the unflawed region.
    pub radius: usize,
    pub tilt: TiltOptions,
    /// Automaton steps for persistence runs.
    pub steps: usize,
}

impl Default for AnalysisParams {
    fn default() -> Self {
        AnalysisParams { radius: 1, tilt: TiltOptions::default(), steps: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectFile {
    pub name: String,
    pub sft: SftSpec,
    #[serde(default)]
    pub cocycles: Vec<CocycleRule>,
    #[serde(default)]
    pub equivariant: Vec<EquivariantCochainRule>,
    #[serde(default)]
    pub cas: Vec<CaRule>,
    #[serde(default)]
    pub configurations: Vec<NamedConfiguration>,
    #[serde(default)]
    pub analysis: AnalysisParams,
}

fn find<'a, T>(items: &'a [T], name: &str, what: &str, key: impl Fn(&T) -> &str) -> Result<&'a T> {
    items.iter().find(|x| key(x) == name).ok_or_else(|| {
        let known: Vec<&str> = items.iter().map(&key).collect();
        Error::UnknownName(format!("no {what} named {name:?} (known: {})", known.join(", ")))
    })
}

impl ProjectFile {
    pub fn new(name: &str, sft: SftSpec) -> Self {
        ProjectFile {
            name: name.into(),
            sft,
            cocycles: vec![],
            equivariant: vec![],
            cas: vec![],
            configurations: vec![],
            analysis: AnalysisParams::default(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: ProjectFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("project files serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
    }

    /// Dimensions, alphabets and name uniqueness agree across sections.
    pub fn validate(&self) -> Result<()> {
        let dim = self.sft.dim;
        let n = self.sft.alphabet.len();
        let mismatch = |what: &str, name: &str| Err(Error::SpecMismatch(format!("{what} {name:?} does not fit the shift")));
        for c in &self.cocycles {
            if c.dim != dim {
                return mismatch("cocycle", &c.name);
            }
        }
        for e in &self.equivariant {
            if e.dim != dim {
                return mismatch("cochain", &e.name);
            }
        }
        for ca in &self.cas {
            if ca.dim != dim || ca.alphabet_size != n {
                return mismatch("automaton", &ca.name);
            }
        }
        for c in &self.configurations {
            if c.configuration.dim() != dim || c.configuration.cells().iter().any(|&s| s as usize >= n) {
                return mismatch("configuration", &c.name);
            }
        }
        let mut names: Vec<&str> = self.cocycles.iter().map(|c| c.name.as_str()).collect();
        names.extend(self.equivariant.iter().map(|c| c.name.as_str()));
        for list in [names, self.cas.iter().map(|c| c.name.as_str()).collect(), self.configurations.iter().map(|c| c.name.as_str()).collect()] {
            let mut sorted = list.clone();
            sorted.sort();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Invalid(format!("name {:?} is used twice", w[0])));
            }
        }
        Ok(())
    }

    pub fn configuration(&self, name: &str) -> Result<&Configuration> {
        Ok(&find(&self.configurations, name, "configuration", |c| &c.name)?.configuration)
    }

    pub fn cocycle(&self, name: &str) -> Result<&CocycleRule> {
        find(&self.cocycles, name, "cocycle", |c| &c.name)
    }

    pub fn equivariant_cochain(&self, name: &str) -> Result<&EquivariantCochainRule> {
        find(&self.equivariant, name, "cochain", |c| &c.name)
    }

    pub fn ca(&self, name: &str) -> Result<&CaRule> {
        find(&self.cas, name, "automaton", |c| &c.name)
    }

    /// The named cocycle, or the only one when no name is given.
    pub fn pick_cocycle(&self, name: Option<&str>) -> Result<&CocycleRule> {
        match (name, self.cocycles.as_slice()) {
            (Some(n), _) => self.cocycle(n),
            (None, [c, ..]) => Ok(c),
            (None, []) => Err(Error::UnknownName(format!("project {:?} has no cocycles", self.name))),
        }
    }

    pub fn pick_configuration(&self, name: Option<&str>) -> Result<&NamedConfiguration> {
        match (name, self.configurations.as_slice()) {
            (Some(n), _) => find(&self.configurations, n, "configuration", |c| &c.name),
            (None, [c, ..]) => Ok(c),
            (None, []) => Err(Error::UnknownName(format!("project {:?} has no configurations", self.name))),
        }
    }

    fn with_configs(mut self, configs: Vec<(&str, Configuration)>) -> Self {
        self.configurations =
            configs.into_iter().map(|(name, configuration)| NamedConfiguration { name: name.into(), configuration }).collect();
        self
    }
}

/// Names of the bundled projects.
pub const FIXTURE_PROJECTS: [&str; 5] = ["ice", "dominoes", "paths", "ice-cubes-3d", "golden-mean"];

/// A bundled project by name.
pub fn fixture_project(name: &str) -> Result<ProjectFile> {
    let p = match name {
        "ice" => {
            let mut p = ProjectFile::new("ice", fixtures::ice());
            p.cocycles = vec![fixtures::ice_height()];
            p.cas = vec![CaRule::identity(2, 6), CaRule::shift(Site::from([1, 0]), 6)];
            p.with_configs(vec![("ice-pole", fixtures::ice_pole()), ("ice-gap", fixtures::ice_gap())])
        }
        "dominoes" => {
            let mut p = ProjectFile::new("dominoes", fixtures::dominoes());
            p.cocycles = vec![fixtures::domino_rule()];
            p.cas = vec![CaRule::identity(2, 4)];
            p.with_configs(vec![
                ("domino-gap", fixtures::domino_gap()),
                ("domino-gap-opposite", fixtures::domino_gap_opposite()),
            ])
        }
        "paths" => {
            let mut p = ProjectFile::new("paths", fixtures::paths());
            p.cocycles = vec![fixtures::path_parity()];
            p.cas = vec![CaRule::identity(2, 21)];
            p.with_configs(vec![("paths-poles", fixtures::paths_poles()), ("paths-boundary", fixtures::paths_boundary())])
        }
        "ice-cubes-3d" => {
            let mut p = ProjectFile::new("ice-cubes-3d", fixtures::ice_cubes());
            p.equivariant = vec![fixtures::pin_cocycle()];
            p.cas = vec![CaRule::identity(3, 20), CaRule::shift(Site::from([1, 0, 0]), 20)];
            let bg = fixtures::cube_symbol(&[(0, 1), (1, 1), (2, 1)]);
            let background = Configuration::from_fn(Rect::new(vec![-4; 3], vec![4; 3]), |_| bg);
            p.with_configs(vec![("ice-cubes-pole", fixtures::ice_cubes_pole()), ("ice-cubes-background", background)])
        }
        "golden-mean" => {
            let mut p = ProjectFile::new("golden-mean", fixtures::golden_mean());
            p.cas = vec![CaRule::identity(1, 2), CaRule::shift(Site::from([1]), 2)];
            // Period-3 background with one forbidden `11` at the origin.
            let defect = Configuration::from_fn(Rect::new(vec![-20], vec![20]), |z| match z.0[0] {
                0 | 1 => 1,
                x => (x.rem_euclid(3) == 1) as Sym,
            });
            p.with_configs(vec![("golden-mean-defect", defect)])
        }
        _ => {
            return Err(Error::UnknownName(format!(
                "no fixture named {name:?} (known: {})",
                fixture_names().join(", ")
            )))
        }
    };
    Ok(p)
}

/// Every bundled project and configuration name.
pub fn fixture_names() -> Vec<String> {
    let mut out = vec![];
    for p in FIXTURE_PROJECTS {
        out.push(p.to_string());
        out.extend(fixture_project(p).unwrap().configurations.into_iter().map(|c| c.name));
    }
    out
}

/// Resolve a fixture name to its project and, for configuration names, the
/// configuration within it.
pub fn resolve_fixture(name: &str) -> Result<(ProjectFile, Option<String>)> {
    if FIXTURE_PROJECTS.contains(&name) {
        return Ok((fixture_project(name)?, None));
    }
    for p in FIXTURE_PROJECTS {
        let proj = fixture_project(p)?;
        if proj.configurations.iter().any(|c| c.name == name) {
            return Ok((proj, Some(name.to_string())));
        }
    }
    Err(Error::UnknownName(format!("no fixture named {name:?} (known: {})", fixture_names().join(", "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_round_trip() {
        for name in FIXTURE_PROJECTS {
            let p = fixture_project(name).unwrap();
            p.validate().unwrap();
            assert_eq!(ProjectFile::from_json(&p.to_json()).unwrap(), p, "{name}");
        }
    }

    #[test]
    fn resolution() {
        let (p, c) = resolve_fixture("ice-pole").unwrap();
        assert_eq!(p.name, "ice");
        assert_eq!(c.as_deref(), Some("ice-pole"));
        assert_eq!(resolve_fixture("nope").unwrap_err().kind(), "unknown-name");
    }
}
