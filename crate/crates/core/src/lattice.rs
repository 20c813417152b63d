//! Device geometry and parameters.
//!
//! A [`DeviceSpec`] is the single description of a junction: an ordered list
//! of sites (each belonging to one region), the intra-region bond graph, the
//! inter-region couplings, and named site labels. The four junction families
//! studied here are produced by the `build_*` constructors, which always
//! return specs that pass [`DeviceSpec::validate`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type SiteId = usize;

/// Integer lattice coordinate `(row, column)`.
pub type Coord = (i32, i32);

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Pairing rule used when assembling a region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionKind {
    /// s-wave: onsite pairing `Δ₀(τx cos φ − τy sin φ)`.
    NormalSc,
    /// Kitaev chain: hopping pairing `−iΔ₀τy` on each bond (phase-free).
    KitaevTsc,
    /// p-wave chain carrying a phase: hopping pairing `−Δ̂(φ)τz` on each bond.
    TscPhaseHopping,
}

impl RegionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionKind::NormalSc => "normal_sc",
            RegionKind::KitaevTsc => "kitaev_tsc",
            RegionKind::TscPhaseHopping => "tsc_phase_hopping",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "normal_sc" | "NormalSC" | "sc" => Some(RegionKind::NormalSc),
            "kitaev_tsc" | "KitaevTSC" | "kitaev" => Some(RegionKind::KitaevTsc),
            "tsc_phase_hopping" | "TscPhaseHopping" | "tsc" => Some(RegionKind::TscPhaseHopping),
            _ => None,
        }
    }
}

/// Material parameters of one region. Energies are in eV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionModel {
    pub name: String,
    pub kind: RegionKind,
    pub mu: f64,
    pub t: f64,
    pub delta0: f64,
    /// Always stored in `[0, 2π)`.
    pub phase: f64,
    pub lattice_const: f64,
}

impl RegionModel {
    pub fn new(name: impl Into<String>, kind: RegionKind, mu: f64, t: f64, delta0: f64, phase: f64) -> Self {
        RegionModel {
            name: name.into(),
            kind,
            mu,
            t,
            delta0,
            phase: normalize_phase(phase),
            lattice_const: 1.0,
        }
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        RegionModel {
            phase: normalize_phase(phase),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Site {
    pub region: usize,
    pub coord: Coord,
}

/// Tunnel link between two sites of (usually) different regions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub site_a: SiteId,
    pub site_b: SiteId,
    pub strength: f64,
}

/// Full junction description. Immutable once built; share freely.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DeviceSpec {
    pub sites: Vec<Site>,
    pub regions: Vec<RegionModel>,
    /// Directed intra-region bonds `(from, to)`: the hopping pairing block is
    /// placed at `to ← from`.
    pub bonds: Vec<(SiteId, SiteId)>,
    pub couplings: Vec<Coupling>,
    pub labels: BTreeMap<String, SiteId>,
}

/// A broken [`DeviceSpec`] invariant.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    SelfBond(SiteId),
    DuplicateBond(SiteId, SiteId),
    UnknownSite(SiteId),
    UnknownRegion {
        site: SiteId,
        region: usize,
    },
    CrossRegionBond(SiteId, SiteId),
    SelfCoupling(SiteId),
    NegativeCoupling {
        site_a: SiteId,
        site_b: SiteId,
        strength: f64,
    },
    BadRegionParameter {
        region: String,
        reason: String,
    },
    DuplicateRegionName(String),
    UnknownLabel {
        label: String,
        site: SiteId,
    },
    DuplicateCoordinate(Coord),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfBond(s) => write!(f, "self bond at site {s}"),
            Violation::DuplicateBond(a, b) => write!(f, "duplicate bond {a}-{b}"),
            Violation::UnknownSite(s) => write!(f, "unknown site {s}"),
            Violation::UnknownRegion { site, region } => {
                write!(f, "site {site} refers to unknown region {region}")
            }
            Violation::CrossRegionBond(a, b) => {
                write!(f, "bond {a}-{b} joins two regions (use a coupling)")
            }
            Violation::SelfCoupling(s) => write!(f, "coupling from site {s} to itself"),
            Violation::NegativeCoupling {
                site_a,
                site_b,
                strength,
            } => {
                write!(f, "coupling {site_a}-{site_b} has negative strength {strength}")
            }
            Violation::BadRegionParameter { region, reason } => {
                write!(f, "region '{region}': {reason}")
            }
            Violation::DuplicateRegionName(n) => write!(f, "duplicate region name '{n}'"),
            Violation::UnknownLabel { label, site } => {
                write!(f, "label '{label}' points to unknown site {site}")
            }
            Violation::DuplicateCoordinate((r, c)) => {
                write!(f, "two sites share coordinate ({r}, {c})")
            }
        }
    }
}

impl DeviceSpec {
    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn region_of(&self, site: SiteId) -> &RegionModel {
        &self.regions[self.sites[site].region]
    }

    /// Sites belonging to region `region`, in index order.
    pub fn sites_in_region(&self, region: usize) -> Vec<SiteId> {
        (0..self.sites.len())
            .filter(|&s| self.sites[s].region == region)
            .collect()
    }

    pub fn region_index(&self, name: &str) -> Option<usize> {
        self.regions.iter().position(|r| r.name == name)
    }

    pub fn label(&self, name: &str) -> Option<SiteId> {
        self.labels.get(name).copied()
    }

    /// Returns every broken invariant; empty means the spec is valid.
    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.sites.len();

        let mut names = BTreeSet::new();
        for r in &self.regions {
            if !names.insert(r.name.as_str()) {
                out.push(Violation::DuplicateRegionName(r.name.clone()));
            }
            let bad = |reason: &str| Violation::BadRegionParameter {
                region: r.name.clone(),
                reason: reason.to_string(),
            };
            if !(r.t > 0.0) {
                out.push(bad("hopping t must be positive"));
            }
            if !(r.delta0 >= 0.0) {
                out.push(bad("pairing delta0 must be non-negative"));
            }
            if !r.mu.is_finite() {
                out.push(bad("chemical potential must be finite"));
            }
            if !(0.0..TAU).contains(&r.phase) {
                out.push(bad("phase must be normalized to [0, 2pi)"));
            }
        }

        let mut coords = HashMap::new();
        for (id, s) in self.sites.iter().enumerate() {
            if s.region >= self.regions.len() {
                out.push(Violation::UnknownRegion {
                    site: id,
                    region: s.region,
                });
            }
            if coords.insert(s.coord, id).is_some() {
                out.push(Violation::DuplicateCoordinate(s.coord));
            }
        }

        let mut seen = BTreeSet::new();
        for &(a, b) in &self.bonds {
            if a >= n || b >= n {
                if a >= n {
                    out.push(Violation::UnknownSite(a));
                }
                if b >= n {
                    out.push(Violation::UnknownSite(b));
                }
                continue;
            }
            if a == b {
                out.push(Violation::SelfBond(a));
                continue;
            }
            if !seen.insert((a.min(b), a.max(b))) {
                out.push(Violation::DuplicateBond(a, b));
            }
            if self.sites[a].region != self.sites[b].region {
                out.push(Violation::CrossRegionBond(a, b));
            }
        }

        for c in &self.couplings {
            let mut known = true;
            for s in [c.site_a, c.site_b] {
                if s >= n {
                    out.push(Violation::UnknownSite(s));
                    known = false;
                }
            }
            if known && c.site_a == c.site_b {
                out.push(Violation::SelfCoupling(c.site_a));
            }
            if !(c.strength >= 0.0) {
                out.push(Violation::NegativeCoupling {
                    site_a: c.site_a,
                    site_b: c.site_b,
                    strength: c.strength,
                });
            }
            if known && c.site_a != c.site_b && !seen.insert((c.site_a.min(c.site_b), c.site_a.max(c.site_b))) {
                out.push(Violation::DuplicateBond(c.site_a, c.site_b));
            }
        }

        for (label, &site) in &self.labels {
            if site >= n {
                out.push(Violation::UnknownLabel {
                    label: label.clone(),
                    site,
                });
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidDevice(v))
        }
    }

    /// Copy with region `region`'s phase replaced.
    pub fn with_region_phase(&self, region: usize, phase: f64) -> DeviceSpec {
        let mut spec = self.clone();
        spec.regions[region].phase = normalize_phase(phase);
        spec
    }

    /// Copy with every region phase shifted by `offset`.
    pub fn with_phase_offset(&self, offset: f64) -> DeviceSpec {
        let mut spec = self.clone();
        for r in &mut spec.regions {
            r.phase = normalize_phase(r.phase + offset);
        }
        spec
    }

    /// Indices of the region's sites within `window` bonds of a chain end, in
    /// the order they appear in the site list.
    pub fn chain_edge(&self, region: usize, from_end: bool, window: usize) -> Vec<SiteId> {
        let sites = self.sites_in_region(region);
        if from_end {
            sites[sites.len().saturating_sub(window)..].to_vec()
        } else {
            sites[..window.min(sites.len())].to_vec()
        }
    }
}

/// Incrementally assembles a [`DeviceSpec`].
#[derive(Default)]
struct SpecBuilder {
    spec: DeviceSpec,
    by_coord: HashMap<Coord, SiteId>,
}

impl SpecBuilder {
    fn region(&mut self, model: RegionModel) -> usize {
        self.spec.regions.push(model);
        self.spec.regions.len() - 1
    }

    fn site(&mut self, region: usize, coord: Coord) -> SiteId {
        let id = self.spec.sites.len();
        self.spec.sites.push(Site { region, coord });
        self.by_coord.insert(coord, id);
        id
    }

    fn chain(&mut self, region: usize, row: i32, cols: std::ops::Range<i32>) -> Vec<SiteId> {
        let ids: Vec<_> = cols.map(|c| self.site(region, (row, c))).collect();
        for w in ids.windows(2) {
            self.spec.bonds.push((w[0], w[1]));
        }
        ids
    }

    fn couple(&mut self, a: SiteId, b: SiteId, strength: f64) {
        self.spec.couplings.push(Coupling {
            site_a: a,
            site_b: b,
            strength,
        });
    }

    fn finish(self) -> Result<DeviceSpec> {
        self.spec.ensure_valid()?;
        Ok(self.spec)
    }
}

fn check_chain_len(n: usize) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidGeometry(format!(
            "chain length must be even and at least 4, got {n}"
        )));
    }
    Ok(())
}

fn label_junction(b: &mut SpecBuilder, left: &[SiteId], right: &[SiteId]) {
    let labels = &mut b.spec.labels;
    labels.insert("left_edge".into(), left[0]);
    labels.insert("junction_left".into(), *left.last().unwrap());
    labels.insert("junction_right".into(), right[0]);
    labels.insert("right_edge".into(), *right.last().unwrap());
}

/// Two s-wave chains of `n/2` sites; the right one carries phase `phi`.
pub fn build_sc_sc(n: usize, mu: f64, t: f64, delta0: f64, phi: f64, v_junction: f64) -> Result<DeviceSpec> {
    check_chain_len(n)?;
    let half = (n / 2) as i32;
    let mut b = SpecBuilder::default();
    let l = b.region(RegionModel::new("left", RegionKind::NormalSc, mu, t, delta0, 0.0));
    let r = b.region(RegionModel::new("right", RegionKind::NormalSc, mu, t, delta0, phi));
    let left = b.chain(l, 0, 0..half);
    let right = b.chain(r, 0, half..2 * half);
    b.couple(*left.last().unwrap(), right[0], v_junction);
    label_junction(&mut b, &left, &right);
    b.finish()
}

/// s-wave chain (phase `phi`) coupled through `v_c` to a Kitaev chain.
pub fn build_sc_tsc(n: usize, mu: f64, t: f64, delta0: f64, phi: f64, v_c: f64) -> Result<DeviceSpec> {
    check_chain_len(n)?;
    let half = (n / 2) as i32;
    let mut b = SpecBuilder::default();
    let l = b.region(RegionModel::new("sc", RegionKind::NormalSc, mu, t, delta0, phi));
    let r = b.region(RegionModel::new("tsc", RegionKind::KitaevTsc, mu, t, delta0, 0.0));
    let left = b.chain(l, 0, 0..half);
    let right = b.chain(r, 0, half..2 * half);
    b.couple(*left.last().unwrap(), right[0], v_c);
    label_junction(&mut b, &left, &right);
    b.finish()
}

/// Two phase-carrying p-wave chains with independent chemical potentials,
/// joined by a bond of strength `t`.
pub fn build_tsc_tsc(n: usize, mu_left: f64, mu_right: f64, t: f64, delta0: f64, phi: f64) -> Result<DeviceSpec> {
    build_tsc_tsc_with_junction(n, mu_left, mu_right, t, delta0, phi, t)
}

pub fn build_tsc_tsc_with_junction(
    n: usize,
    mu_left: f64,
    mu_right: f64,
    t: f64,
    delta0: f64,
    phi: f64,
    v_junction: f64,
) -> Result<DeviceSpec> {
    check_chain_len(n)?;
    let half = (n / 2) as i32;
    let mut b = SpecBuilder::default();
    let l = b.region(RegionModel::new(
        "left",
        RegionKind::TscPhaseHopping,
        mu_left,
        t,
        delta0,
        0.0,
    ));
    let r = b.region(RegionModel::new(
        "right",
        RegionKind::TscPhaseHopping,
        mu_right,
        t,
        delta0,
        phi,
    ));
    let left = b.chain(l, 0, 0..half);
    let right = b.chain(r, 0, half..2 * half);
    b.couple(*left.last().unwrap(), right[0], v_junction);
    label_junction(&mut b, &left, &right);
    b.finish()
}

/// One gate-controlled link between an island end and a host block site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contact {
    pub island_cell: Coord,
    pub host_cell: Coord,
}

/// Island layout: cells plus directed bonds between them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IslandShape {
    pub cells: Vec<Coord>,
    pub bonds: Vec<(Coord, Coord)>,
}

impl IslandShape {
    /// Straight horizontal wire, bonds oriented left to right.
    pub fn horizontal(row: i32, col0: i32, len: i32) -> Self {
        let cells: Vec<Coord> = (col0..col0 + len).map(|c| (row, c)).collect();
        let bonds = cells.windows(2).map(|w| (w[0], w[1])).collect();
        IslandShape { cells, bonds }
    }

    /// Horizontal bar with two legs rising from bar positions `legs.0` and
    /// `legs.1`, each meeting the bar at a T-junction. The bar runs left to
    /// right; the left leg is oriented away from the bar and the right leg
    /// toward it. With both legs oriented alike the two T-junction end modes
    /// are of the same Majorana type and barely hybridize.
    pub fn bar_with_legs(row: i32, col0: i32, bar_len: i32, leg_len: i32, legs: (i32, i32)) -> Self {
        let IslandShape { mut cells, mut bonds } = Self::horizontal(row, col0, bar_len);
        for (k, at) in [legs.0, legs.1].into_iter().enumerate() {
            let leg: Vec<Coord> = (0..=leg_len).map(|h| (row - h, col0 + at)).collect();
            cells.extend(&leg[1..]);
            for w in leg.windows(2) {
                bonds.push(if k == 0 { (w[0], w[1]) } else { (w[1], w[0]) });
            }
        }
        IslandShape { cells, bonds }
    }

    fn degree(&self, cell: Coord) -> usize {
        self.bonds.iter().filter(|(a, b)| *a == cell || *b == cell).count()
    }
}

/// Layout of the two-island device. Host blocks occupy rows
/// `0..host_rows`; the left block spans columns `0..host_cols`, the gap the
/// next `gap_cols` columns, and the right block the `host_cols` after that.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MsqGeometry {
    pub host_rows: i32,
    pub host_cols: i32,
    pub gap_cols: i32,
    /// Island carrying phase φ₁.
    pub wire: IslandShape,
    /// Island carrying phase φ₂.
    pub ibar: IslandShape,
    /// Contacts 1..=6 in order.
    pub contacts: [Contact; 6],
}

impl MsqGeometry {
    /// Canonical layout: 20×15 host blocks around a 20-column gap. The wire
    /// crosses the gap at row 4 (contacts 1, 2). The second island is a
    /// 6-site bar at row 14 with 7-site legs rising from its two middle
    /// sites; its bar ends are contacts 5 (left) and 4 (right), its leg tops
    /// contacts 3 (left) and 6 (right). Contacts 3 and 6 link to the host
    /// boundary column on the same row.
    pub fn canonical() -> Self {
        let host_rows = 20;
        let host_cols = 15;
        let gap_cols = 20;
        let g0 = host_cols;
        let right0 = host_cols + gap_cols;

        let wire = IslandShape::horizontal(4, g0, 20);

        let (bar_row, bar0, bar_len, leg_len) = (14, g0 + 7, 6, 7);
        let ibar = IslandShape::bar_with_legs(bar_row, bar0, bar_len, leg_len, (2, 3));

        let contact = |island_cell: Coord, host_col: i32| Contact {
            island_cell,
            host_cell: (island_cell.0, host_col),
        };
        let top = bar_row - leg_len;
        let contacts = [
            contact((4, g0), g0 - 1),
            contact((4, g0 + 19), right0),
            contact((top, bar0 + 2), g0 - 1),
            contact((bar_row, bar0 + bar_len - 1), right0),
            contact((bar_row, bar0), g0 - 1),
            contact((top, bar0 + 3), right0),
        ];
        MsqGeometry {
            host_rows,
            host_cols,
            gap_cols,
            wire,
            ibar,
            contacts,
        }
    }

    pub fn host_sites(&self) -> usize {
        (self.host_rows * self.host_cols) as usize
    }

    fn in_left_host(&self, (r, c): Coord) -> bool {
        (0..self.host_rows).contains(&r) && (0..self.host_cols).contains(&c)
    }

    fn in_right_host(&self, (r, c): Coord) -> bool {
        let c0 = self.host_cols + self.gap_cols;
        (0..self.host_rows).contains(&r) && (c0..c0 + self.host_cols).contains(&c)
    }

    fn in_gap(&self, (r, c): Coord) -> bool {
        (0..self.host_rows).contains(&r) && (self.host_cols..self.host_cols + self.gap_cols).contains(&c)
    }

    fn on_host_boundary(&self, (r, c): Coord) -> bool {
        let right0 = self.host_cols + self.gap_cols;
        (self.in_left_host((r, c)) && c == self.host_cols - 1) || (self.in_right_host((r, c)) && c == right0)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::InvalidGeometry(m));
        if self.host_rows < 1 || self.host_cols < 1 || self.gap_cols < 1 {
            return err("host blocks and gap must be non-empty".into());
        }
        let mut all = BTreeSet::new();
        for (name, island) in [("wire", &self.wire), ("ibar", &self.ibar)] {
            if island.cells.is_empty() {
                return err(format!("{name} island has no cells"));
            }
            for &cell in &island.cells {
                if !self.in_gap(cell) {
                    return err(format!("{name} cell {cell:?} lies outside the vacuum gap"));
                }
                if !all.insert(cell) {
                    return err(format!("{name} cell {cell:?} overlaps another island cell"));
                }
            }
            for (a, b) in &island.bonds {
                if !island.cells.contains(a) || !island.cells.contains(b) {
                    return err(format!("{name} bond {a:?}-{b:?} references a missing cell"));
                }
                if (a.0 - b.0).abs() + (a.1 - b.1).abs() != 1 {
                    return err(format!("{name} bond {a:?}-{b:?} is not nearest-neighbour"));
                }
            }
        }
        for (i, c) in self.contacts.iter().enumerate() {
            let island = if self.wire.cells.contains(&c.island_cell) {
                &self.wire
            } else if self.ibar.cells.contains(&c.island_cell) {
                &self.ibar
            } else {
                return err(format!(
                    "contact {} island cell {:?} is not on an island",
                    i + 1,
                    c.island_cell
                ));
            };
            if island.degree(c.island_cell) != 1 {
                return err(format!(
                    "contact {} island cell {:?} is not an island end",
                    i + 1,
                    c.island_cell
                ));
            }
            if !self.on_host_boundary(c.host_cell) {
                return err(format!(
                    "contact {} host cell {:?} is not on a host block edge",
                    i + 1,
                    c.host_cell
                ));
            }
        }
        Ok(())
    }
}

/// Two-island device between two 2D s-wave hosts. Left host phase is 0,
/// right host `phi`; the wire island carries `phi1`, the bar island `phi2`.
/// `gates[i]` is the strength of contact `i + 1`.
pub fn build_msq(
    phi: f64,
    phi1: f64,
    phi2: f64,
    gates: &[f64],
    geometry: &MsqGeometry,
    params: MsqParams,
) -> Result<DeviceSpec> {
    if gates.len() != 6 {
        return Err(Error::InvalidGeometry(format!(
            "expected 6 gate values, got {}",
            gates.len()
        )));
    }
    geometry.validate()?;
    let MsqParams {
        mu_sc,
        mu_tsc,
        t,
        delta0,
    } = params;

    let mut b = SpecBuilder::default();
    let left = b.region(RegionModel::new(
        "host_left",
        RegionKind::NormalSc,
        mu_sc,
        t,
        delta0,
        0.0,
    ));
    let right = b.region(RegionModel::new(
        "host_right",
        RegionKind::NormalSc,
        mu_sc,
        t,
        delta0,
        phi,
    ));
    let wire = b.region(RegionModel::new(
        "wire",
        RegionKind::TscPhaseHopping,
        mu_tsc,
        t,
        delta0,
        phi1,
    ));
    let ibar = b.region(RegionModel::new(
        "ibar",
        RegionKind::TscPhaseHopping,
        mu_tsc,
        t,
        delta0,
        phi2,
    ));

    let right0 = geometry.host_cols + geometry.gap_cols;
    for (region, c0) in [(left, 0), (right, right0)] {
        for r in 0..geometry.host_rows {
            for c in c0..c0 + geometry.host_cols {
                b.site(region, (r, c));
            }
        }
        for r in 0..geometry.host_rows {
            for c in c0..c0 + geometry.host_cols {
                let here = b.by_coord[&(r, c)];
                if c + 1 < c0 + geometry.host_cols {
                    let east = b.by_coord[&(r, c + 1)];
                    b.spec.bonds.push((here, east));
                }
                if r + 1 < geometry.host_rows {
                    let north = b.by_coord[&(r + 1, c)];
                    b.spec.bonds.push((here, north));
                }
            }
        }
    }
    for (region, island) in [(wire, &geometry.wire), (ibar, &geometry.ibar)] {
        for &cell in &island.cells {
            b.site(region, cell);
        }
        for (a, c) in &island.bonds {
            let (a, c) = (b.by_coord[a], b.by_coord[c]);
            b.spec.bonds.push((a, c));
        }
    }
    for (i, contact) in geometry.contacts.iter().enumerate() {
        let island = b.by_coord[&contact.island_cell];
        let host = b.by_coord[&contact.host_cell];
        b.couple(island, host, gates[i]);
        b.spec.labels.insert(format!("contact{}", i + 1), island);
        b.spec.labels.insert(format!("contact{}_host", i + 1), host);
    }
    b.finish()
}

/// Material parameters shared by all MSQ regions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MsqParams {
    pub mu_sc: f64,
    pub mu_tsc: f64,
    pub t: f64,
    pub delta0: f64,
}

impl Default for MsqParams {
    fn default() -> Self {
        MsqParams {
            mu_sc: 0.25,
            mu_tsc: 0.25,
            t: 0.5,
            delta0: 1.0,
        }
    }
}
