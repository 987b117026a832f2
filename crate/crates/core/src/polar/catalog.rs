use std::path::Path;

use super::{parse_spec, CodeSpec, DistanceTerms, PrecodedPolarCode};
use crate::error::{Error, Result};

/// Where a catalog entry's definition comes from.
#[derive(Clone, Debug)]
pub enum CatalogSource {
    Builtin {
        spec: CodeSpec,
        distance: Option<DistanceTerms>,
    },
    /// Slot whose matrix has to be supplied from a spec file.
    External { hint: String },
    Loaded {
        spec: CodeSpec,
        distance: Option<DistanceTerms>,
        path: String,
    },
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub source: CatalogSource,
}

impl CatalogEntry {
    pub fn is_available(&self) -> bool {
        !matches!(self.source, CatalogSource::External { .. })
    }
}

/// Named component codes.
#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

fn builtin(
    name: &str,
    description: &str,
    n: u32,
    info: &[usize],
    constraints: &[(usize, &[usize])],
    distance: Option<DistanceTerms>,
) -> CatalogEntry {
    let constraints: Vec<(usize, Vec<usize>)> =
        constraints.iter().map(|(t, s)| (*t, s.to_vec())).collect();
    CatalogEntry {
        name: name.into(),
        description: description.into(),
        source: CatalogSource::Builtin {
            spec: CodeSpec::from_one_based(n, info, &constraints).expect("builtin spec is valid"),
            distance,
        },
    }
}

/// The built-in component codes plus the slots for externally supplied ones.
///
/// Index sets are 1-based and use natural bit order (`c = u * K^{⊗n}`); the
/// (16,7) enumerator `1 + 48x^6 + 30x^8 + 48x^10 + x^16` holds in that order.
pub fn builtin_codes() -> Catalog {
    let d6 = Some(DistanceTerms { d: 6, multiplicity: 48 });
    Catalog {
        entries: vec![
            builtin(
                "ebch16_7",
                "(16,7) extended BCH code as a precoded polar code",
                4,
                &[4, 7, 8, 12, 14, 15, 16],
                &[(6, &[4]), (10, &[4, 7]), (11, &[4, 7]), (13, &[7])],
                d6,
            ),
            builtin(
                "opt16_7",
                "(16,7) precoded polar code with the eBCH enumerator and SCL-friendly information set",
                4,
                &[6, 7, 8, 12, 14, 15, 16],
                &[(10, &[6, 7]), (11, &[6])],
                d6,
            ),
            builtin(
                "rep2_1",
                "(2,1) repetition code",
                1,
                &[2],
                &[],
                Some(DistanceTerms { d: 2, multiplicity: 1 }),
            ),
            builtin(
                "spc4_3",
                "(4,3) single parity-check code",
                2,
                &[2, 3, 4],
                &[],
                Some(DistanceTerms { d: 2, multiplicity: 6 }),
            ),
            CatalogEntry {
                name: "mv32_17".into(),
                description: "(32,17) precoded polar code, d = 6".into(),
                source: CatalogSource::External {
                    hint: "supply mv32_17.spec with the published (32,17) precoding matrix".into(),
                },
            },
            CatalogEntry {
                name: "mv32_21".into(),
                description: "(32,21) precoded polar code, d = 6".into(),
                source: CatalogSource::External {
                    hint: "supply mv32_21.spec with the published (32,21) precoding matrix".into(),
                },
            },
        ],
    }
}

impl Catalog {
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    /// Builds the named code, or reports that its external spec is missing.
    pub fn resolve(&self, name: &str) -> Result<PrecodedPolarCode> {
        let entry = self
            .get(name)
            .ok_or_else(|| Error::UnknownCode(name.to_string()))?;
        let (spec, distance) = match &entry.source {
            CatalogSource::Builtin { spec, distance } => (spec, distance),
            CatalogSource::Loaded { spec, distance, .. } => (spec, distance),
            CatalogSource::External { hint } => {
                return Err(Error::ExternalSpecRequired {
                    name: name.to_string(),
                    hint: hint.clone(),
                })
            }
        };
        let mut code = PrecodedPolarCode::new(spec.clone()).with_name(name);
        if let Some(d) = distance {
            code = code.with_distance(*d);
        }
        Ok(code)
    }

    /// Fills a catalog slot from spec-file text.
    pub fn load_external_text(&mut self, name: &str, text: &str, origin: &str) -> Result<()> {
        let file = parse_spec(text)?;
        let spec = file.code_spec()?;
        let entry = self
            .entries
            .iter_mut()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownCode(name.to_string()))?;
        entry.source = CatalogSource::Loaded {
            spec,
            distance: file.distance,
            path: origin.to_string(),
        };
        Ok(())
    }

    pub fn load_external(&mut self, name: &str, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.load_external_text(name, &text, &path.display().to_string())
    }

    /// Loads `<dir>/<name>.spec` for every external slot where such a file exists.
    pub fn load_spec_dir(&mut self, dir: &Path) -> Result<Vec<String>> {
        let names: Vec<String> = self
            .entries
            .iter()
            .filter(|e| matches!(e.source, CatalogSource::External { .. }))
            .map(|e| e.name.clone())
            .collect();
        let mut loaded = Vec::new();
        for name in names {
            let path = dir.join(format!("{name}.spec"));
            if path.is_file() {
                self.load_external(&name, &path)?;
                loaded.push(name);
            }
        }
        Ok(loaded)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_example_codes() {
        let cat = builtin_codes();
        let opt = cat.resolve("opt16_7").unwrap();
        assert_eq!((opt.length(), opt.dimension()), (16, 7));
        assert_eq!(opt.name(), Some("opt16_7"));
    }

    #[test]
    fn external_slots_need_files() {
        let mut cat = builtin_codes();
        assert!(!cat.get("mv32_17").unwrap().is_available());
        assert!(matches!(
            cat.resolve("mv32_17"),
            Err(Error::ExternalSpecRequired { .. })
        ));
        // Any valid (32,17) spec fills the slot.
        let info: Vec<String> = (16..=32).map(|i| i.to_string()).collect();
        let text = format!("n: 5\nk: 17\nA: [{}]\n", info.join(", "));
        cat.load_external_text("mv32_17", &text, "inline").unwrap();
        assert_eq!(cat.resolve("mv32_17").unwrap().dimension(), 17);
        // Invalid spec is rejected and leaves the slot empty.
        assert!(cat.load_external_text("mv32_21", "n: 5\nk: 3\nA: [1, 2]\n", "inline").is_err());
        assert!(!cat.get("mv32_21").unwrap().is_available());
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(builtin_codes().resolve("nope"), Err(Error::UnknownCode(_))));
    }
}
