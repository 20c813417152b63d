//! Device config files: a sectioned key-value format.
//!
//! ```text
//! # SC-SC junction, family shorthand
//! [device]
//! family = sc_sc
//! sites = 30
//! mu = 0.5
//! t = 1
//! delta0 = 1
//! ```
//!
//! or an explicit chain of regions laid out left to right in file order:
//!
//! ```text
//! [region.left]
//! kind = normal_sc
//! sites = 15
//! mu = 0.5
//! t = 1
//! delta0 = 1
//!
//! [region.right]
//! kind = normal_sc
//! sites = 15
//! mu = 0.5
//! t = 1
//! delta0 = 1
//! phase_deg = 180
//!
//! [coupling.junction]
//! a = left.end
//! b = right.start
//! strength = 1
//!
//! [sweep]
//! region = right
//! n_phi = 128
//! ```
//!
//! The full grammar is in `docs/config-format.md`. Unknown sections and keys
//! are errors.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Coupling, DeviceSpec, RegionKind, RegionModel, Site};
use crate::sweep::{DeviceFamily, SweepConfig, SweptPhase, DEFAULT_N_PHI};

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    key: String,
    value: String,
    line: usize,
    column: usize,
}

#[derive(Clone, Debug, PartialEq)]
struct Section {
    kind: String,
    name: Option<String>,
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn label(&self) -> String {
        match &self.name {
            Some(n) => format!("{}.{}", self.kind, n),
            None => self.kind.clone(),
        }
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::ConfigSyntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let indent = body.len() - body.trim_start().len();
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return Err(syntax(line_no, indent + trimmed.len(), "missing ']'"));
            };
            let inner = inner.trim();
            let (kind, name) = match inner.split_once('.') {
                Some((k, n)) => (k.trim(), Some(n.trim())),
                None => (inner, None),
            };
            if !is_ident(kind) || name.is_some_and(|n| !is_ident(n)) {
                return Err(syntax(line_no, indent + 2, format!("bad section name '{inner}'")));
            }
            sections.push(Section {
                kind: kind.into(),
                name: name.map(String::from),
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            return Err(syntax(line_no, indent + 1, "expected 'key = value' or '[section]'"));
        };
        let key = trimmed[..eq].trim();
        let value = trimmed[eq + 1..].trim();
        if !is_ident(key) {
            return Err(syntax(line_no, indent + 1, format!("bad key '{key}'")));
        }
        if value.is_empty() {
            return Err(syntax(line_no, indent + eq + 2, format!("missing value for '{key}'")));
        }
        let value = match value.strip_prefix('"') {
            Some(v) => match v.strip_suffix('"') {
                Some(v) => v,
                None => return Err(syntax(line_no, indent + eq + 2, "unterminated string")),
            },
            None => value,
        };
        let Some(section) = sections.last_mut() else {
            return Err(syntax(line_no, indent + 1, "key outside of any section"));
        };
        if section.entries.iter().any(|e| e.key == key) {
            return Err(syntax(line_no, indent + 1, format!("duplicate key '{key}'")));
        }
        section.entries.push(Entry {
            key: key.into(),
            value: value.into(),
            line: line_no,
            column: indent + 1,
        });
    }
    Ok(sections)
}

/// Typed access to one section's entries; tracks which keys were read so
/// leftovers can be reported.
struct Reader<'a> {
    section: &'a Section,
    used: Vec<bool>,
}

impl<'a> Reader<'a> {
    fn new(section: &'a Section) -> Self {
        Reader {
            section,
            used: vec![false; section.entries.len()],
        }
    }

    fn semantic(&self, message: impl Into<String>) -> Error {
        Error::ConfigSemantic {
            section: self.section.label(),
            message: message.into(),
        }
    }

    fn raw(&mut self, key: &str) -> Option<&'a Entry> {
        let k = self.section.entries.iter().position(|e| e.key == key)?;
        self.used[k] = true;
        Some(&self.section.entries[k])
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        e.value
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Some)
            .ok_or_else(|| syntax(e.line, e.column, format!("'{}' is not a number", e.value)))
    }

    fn required(&mut self, key: &str) -> Result<f64> {
        self.number(key)?
            .ok_or_else(|| self.semantic(format!("missing key '{key}'")))
    }

    fn count(&mut self, key: &str) -> Result<Option<usize>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        e.value
            .parse::<usize>()
            .map(Some)
            .map_err(|_| syntax(e.line, e.column, format!("'{}' is not a non-negative integer", e.value)))
    }

    fn text(&mut self, key: &str) -> Option<&'a str> {
        self.raw(key).map(|e| e.value.as_str())
    }

    fn boolean(&mut self, key: &str) -> Result<Option<bool>> {
        let Some(e) = self.raw(key) else { return Ok(None) };
        match e.value.as_str() {
            "true" => Ok(Some(true)),
            "false" => Ok(Some(false)),
            v => Err(syntax(e.line, e.column, format!("'{v}' is not true or false"))),
        }
    }

    /// `phase` or `phase_rad` in radians, `phase_deg` in degrees; at most one.
    fn phase(&mut self) -> Result<Option<f64>> {
        let rad = self.number("phase")?;
        let rad2 = self.number("phase_rad")?;
        let deg = self.number("phase_deg")?.map(|d| d * PI / 180.0);
        let given: Vec<f64> = [rad, rad2, deg].into_iter().flatten().collect();
        match given.len() {
            0 => Ok(None),
            1 => Ok(Some(given[0])),
            _ => Err(self.semantic("give the phase once (phase, phase_rad or phase_deg)")),
        }
    }

    fn finish(self) -> Result<()> {
        for (e, used) in self.section.entries.iter().zip(&self.used) {
            if !used {
                return Err(Error::ConfigSemantic {
                    section: self.section.label(),
                    message: format!("unknown key '{}' (line {})", e.key, e.line),
                });
            }
        }
        Ok(())
    }
}

/// Sweep settings from the optional `[sweep]` section.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepSettings {
    /// Region whose phase is swept (explicit devices only).
    pub region: Option<String>,
    pub n_phi: Option<usize>,
    pub track: Option<bool>,
    pub gap_edge: Option<f64>,
}

/// A parsed config: the device family plus sweep settings.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviceConfig {
    pub family: DeviceFamily,
    /// Phase of the swept variable as written in the config.
    pub phase: f64,
    pub sweep: SweepSettings,
}

impl DeviceConfig {
    pub fn spec(&self) -> Result<DeviceSpec> {
        self.family.build(SweptPhase::Phi, self.phase)
    }

    pub fn sweep_config(&self) -> SweepConfig {
        let mut c = SweepConfig::new(self.family.clone());
        c.n_phi = self.sweep.n_phi.unwrap_or(DEFAULT_N_PHI);
        c.track = self.sweep.track.unwrap_or(true);
        c.gap_edge = self.sweep.gap_edge;
        c
    }
}

pub fn parse_device_config(text: &str) -> Result<DeviceSpec> {
    parse_config(text)?.spec()
}

pub fn parse_config(text: &str) -> Result<DeviceConfig> {
    let sections = parse_sections(text)?;
    if sections.is_empty() {
        return Err(syntax(1, 1, "config has no sections"));
    }
    let mut sweep = SweepSettings::default();
    let mut device: Option<&Section> = None;
    let mut regions: Vec<&Section> = Vec::new();
    let mut couplings: Vec<&Section> = Vec::new();
    let mut seen_sweep = false;
    for s in &sections {
        match (s.kind.as_str(), &s.name) {
            ("device", None) => {
                if device.replace(s).is_some() {
                    return Err(Error::ConfigSemantic {
                        section: s.label(),
                        message: "duplicate [device] section".into(),
                    });
                }
            }
            ("region", Some(_)) => regions.push(s),
            ("coupling", Some(_)) => couplings.push(s),
            ("sweep", None) => {
                if seen_sweep {
                    return Err(Error::ConfigSemantic {
                        section: s.label(),
                        message: "duplicate [sweep] section".into(),
                    });
                }
                seen_sweep = true;
                let mut r = Reader::new(s);
                sweep.region = r.text("region").map(String::from);
                sweep.n_phi = r.count("n_phi")?;
                sweep.track = r.boolean("track")?;
                sweep.gap_edge = r.number("gap_edge")?;
                r.finish()?;
            }
            _ => return Err(syntax(s.line, 1, format!("unknown section [{}]", s.label()))),
        }
    }
    match device {
        Some(d) => {
            if let Some(s) = regions.first().or(couplings.first()) {
                return Err(Error::ConfigSemantic {
                    section: s.label(),
                    message: "[device] shorthand cannot be combined with region or coupling sections".into(),
                });
            }
            let (family, phase) = family_shorthand(d)?;
            if sweep.region.is_some() {
                return Err(Error::ConfigSemantic {
                    section: "sweep".into(),
                    message: "'region' applies only to explicit region chains".into(),
                });
            }
            Ok(DeviceConfig { family, phase, sweep })
        }
        None => {
            let spec = explicit_chain(&regions, &couplings)?;
            let region = match &sweep.region {
                Some(name) => {
                    spec.regions
                        .iter()
                        .position(|r| &r.name == name)
                        .ok_or_else(|| Error::ConfigSemantic {
                            section: "sweep".into(),
                            message: format!("no region named '{name}'"),
                        })?
                }
                None => spec.regions.len() - 1,
            };
            let phase = spec.regions[region].phase;
            Ok(DeviceConfig {
                family: DeviceFamily::Custom { spec, region },
                phase,
                sweep,
            })
        }
    }
}

fn family_shorthand(s: &Section) -> Result<(DeviceFamily, f64)> {
    let mut r = Reader::new(s);
    let family = r.text("family").ok_or_else(|| r.semantic("missing key 'family'"))?;
    let n = r.count("sites")?.ok_or_else(|| r.semantic("missing key 'sites'"))?;
    let t = r.required("t")?;
    let delta0 = r.required("delta0")?;
    let phase = r.phase()?.unwrap_or(0.0);
    let coupling = r.number("coupling")?.unwrap_or(t);
    let out = match family {
        "sc_sc" => DeviceFamily::ScSc {
            n,
            mu: r.required("mu")?,
            t,
            delta0,
            v_junction: coupling,
        },
        "sc_tsc" => DeviceFamily::ScTsc {
            n,
            mu: r.required("mu")?,
            t,
            delta0,
            v_c: coupling,
        },
        "tsc_tsc" => {
            let mu = r.number("mu")?;
            let mu_left = r
                .number("mu_left")?
                .or(mu)
                .ok_or_else(|| r.semantic("missing key 'mu' or 'mu_left'"))?;
            let mu_right = r
                .number("mu_right")?
                .or(mu)
                .ok_or_else(|| r.semantic("missing key 'mu' or 'mu_right'"))?;
            DeviceFamily::TscTsc {
                n,
                mu_left,
                mu_right,
                t,
                delta0,
                v_junction: coupling,
            }
        }
        other => return Err(r.semantic(format!("unknown family '{other}' (sc_sc, sc_tsc, tsc_tsc)"))),
    };
    r.finish()?;
    out.build(SweptPhase::Phi, phase).map_err(|e| Error::ConfigSemantic {
        section: s.label(),
        message: e.to_string(),
    })?;
    Ok((out, phase))
}

fn explicit_chain(regions: &[&Section], couplings: &[&Section]) -> Result<DeviceSpec> {
    if regions.is_empty() {
        return Err(Error::ConfigSemantic {
            section: "region".into(),
            message: "no [device] or [region.*] sections".into(),
        });
    }
    let mut spec = DeviceSpec::default();
    let mut ranges: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut col = 0i32;
    for s in regions {
        let name = s.name.clone().unwrap_or_default();
        let mut r = Reader::new(s);
        if ranges.contains_key(&name) {
            return Err(r.semantic(format!("duplicate region name '{name}'")));
        }
        let kind_text = r.text("kind").ok_or_else(|| r.semantic("missing key 'kind'"))?;
        let kind = RegionKind::parse(kind_text).ok_or_else(|| {
            r.semantic(format!(
                "unknown kind '{kind_text}' (normal_sc, kitaev_tsc, tsc_phase_hopping)"
            ))
        })?;
        let sites = r.count("sites")?.ok_or_else(|| r.semantic("missing key 'sites'"))?;
        if sites == 0 {
            return Err(r.semantic("a region needs at least one site"));
        }
        let mu = r.required("mu")?;
        let t = r.required("t")?;
        let delta0 = r.required("delta0")?;
        let phase = r.phase()?.unwrap_or(0.0);
        let lattice_const = r.number("lattice_const")?.unwrap_or(1.0);
        r.finish()?;
        let mut model = RegionModel::new(&name, kind, mu, t, delta0, phase);
        model.lattice_const = lattice_const;
        let region = spec.regions.len();
        spec.regions.push(model);
        let first = spec.sites.len();
        for k in 0..sites {
            spec.sites.push(Site {
                region,
                coord: (0, col),
            });
            col += 1;
            if k > 0 {
                spec.bonds.push((first + k - 1, first + k));
            }
        }
        spec.labels.insert(format!("{name}.start"), first);
        spec.labels.insert(format!("{name}.end"), first + sites - 1);
        ranges.insert(name, (first, sites));
    }
    for s in couplings {
        let mut r = Reader::new(s);
        let site = |r: &mut Reader, key: &str| -> Result<usize> {
            let v = r.text(key).ok_or_else(|| r.semantic(format!("missing key '{key}'")))?;
            let (region, pos) = v
                .split_once('.')
                .ok_or_else(|| r.semantic(format!("'{v}' is not REGION.start, REGION.end or REGION.INDEX")))?;
            let &(first, len) = ranges
                .get(region)
                .ok_or_else(|| r.semantic(format!("no region named '{region}'")))?;
            let k = match pos {
                "start" => 0,
                "end" => len - 1,
                i => i
                    .parse::<usize>()
                    .ok()
                    .filter(|&i| i < len)
                    .ok_or_else(|| r.semantic(format!("bad site index '{i}' in '{v}'")))?,
            };
            Ok(first + k)
        };
        let a = site(&mut r, "a")?;
        let b = site(&mut r, "b")?;
        let strength = r.required("strength")?;
        r.finish()?;
        spec.couplings.push(Coupling {
            site_a: a,
            site_b: b,
            strength,
        });
    }
    let violations = spec.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidDevice(violations));
    }
    Ok(spec)
}
