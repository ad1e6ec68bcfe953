//! Fully packed loop enumeration on rectangular grids, refined by the link
//! pattern the loop ends induce on the boundary sites.
//!
//! A configuration is a subset of grid edges (internal edges plus external
//! stubs) giving every vertex degree exactly two. Site terminals are fixed
//! occupied stubs; the remaining stubs are fixed vacant except where a
//! preset frees them (the top side carries the seam connections of the
//! cylinder presets and the defect exit of the odd strip preset).
//!
//! Two independent engines produce the tallies: an exhaustive
//! depth-first search with degree pruning, and a broken-profile dynamic
//! program over plug connectivity states. They must agree exactly.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::counts::BigCount;
use crate::error::{Error, Result};
use crate::link::{BoundaryCondition, LinkState};

/// One boundary stub of the grid, identified by side and offset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stub {
    Left(usize),
    Bottom(usize),
    Right(usize),
    Top(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StubState {
    /// Fixed occupied; carries the 1-based terminal id.
    Site(u16),
    /// Fixed vacant.
    Vacant,
    /// Free: the engines branch on it (cylinder back connections, defect
    /// exit). Carries its id, numbered after the site terminals.
    Free(u16),
}

/// How terminal connectivities are converted into sector link states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    /// Strip, even site count: pairs of site terminals become arcs.
    ClosedStrip,
    /// Strip with one defect: exactly one top stub is occupied per
    /// configuration and the site connected to it is the defect.
    ClosedDefect,
    /// Cylinder with distinct connectivities: free top stubs are closed by
    /// nested arcs drawn over the top; every closure arc used counts one
    /// seam crossing.
    CylinderDc,
    /// Disk: plain circular matching of the site terminals.
    DiskIc,
    /// Half-turn symmetric configurations on a square, folded two-to-one
    /// onto cylinder sites; the diameter path becomes the defect.
    HalfTurnFold,
}

/// A grid instance with fixed external edges and a connectivity reading.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    pub l: usize,
    pub bc: BoundaryCondition,
    pub reading: Reading,
    /// Status of every boundary stub.
    stubs: BTreeMap<Stub, StubState>,
    /// Free-stub ids in top-edge order (left to right), for closure rules.
    free_order: Vec<u16>,
    /// Half-turn symmetry restriction (odd periodic preset).
    pub half_turn_symmetric: bool,
    /// Top stubs must be used symmetrically under column reflection: the
    /// grid is the fundamental domain of a half-turn symmetric square and
    /// the top edge is the cut, so stub c is occupied iff stub w-1-c is.
    pub paired_tops: bool,
    /// Upper bound guard for the engines.
    pub site_count: usize,
}

/// Tally of configurations by induced link state.
#[derive(Clone, Debug, Default)]
pub struct ConnectivityTally {
    pub by_state: BTreeMap<String, BigCount>,
    pub states: BTreeMap<String, LinkState>,
}

impl ConnectivityTally {
    pub fn total(&self) -> BigCount {
        self.by_state.values().fold(BigUint::zero(), |a, b| a + b)
    }

    pub fn get(&self, key: &str) -> BigCount {
        self.by_state.get(key).cloned().unwrap_or_else(BigUint::zero)
    }

    pub(crate) fn add_counted(&mut self, state: LinkState, count: BigUint) {
        let key = state.to_string();
        *self.by_state.entry(key.clone()).or_insert_with(BigUint::zero) += count;
        self.states.entry(key).or_insert(state);
    }
}

#[derive(Serialize)]
pub struct TallyExport {
    pub grid: String,
    pub total: String,
    pub by_pattern: BTreeMap<String, String>,
}

pub fn tally_export(spec: &GridSpec, tally: &ConnectivityTally) -> TallyExport {
    TallyExport {
        grid: format!(
            "{}x{} {} L={}",
            spec.width,
            spec.height,
            spec.bc.flag(),
            spec.l
        ),
        total: tally.total().to_string(),
        by_pattern: tally
            .by_state
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect(),
    }
}

impl GridSpec {
    pub(crate) fn stub_state(&self, stub: Stub) -> StubState {
        self.stubs[&stub]
    }

    pub(crate) fn free_ids(&self) -> &[u16] {
        &self.free_order
    }
}

// ---------------------------------------------------------------------------
// presets

/// Grid and boundary pattern for the conjecture attached to (L, bc).
///
/// The strip and cylinder presets occupy every second stub along the
/// left-bottom-right boundary walk starting at the top-left corner; the
/// square presets alternate around the whole perimeter. Terminals are
/// numbered along the walk.
pub fn preset_grid(l: usize, bc: BoundaryCondition) -> Result<GridSpec> {
    match bc {
        BoundaryCondition::Closed if l >= 2 && l % 2 == 0 => {
            Ok(strip_preset(l, l - 1, l / 2, Reading::ClosedStrip))
        }
        BoundaryCondition::Closed if l >= 3 => {
            Ok(strip_preset(l, l, (l - 1) / 2, Reading::ClosedDefect))
        }
        BoundaryCondition::PeriodicDC if l >= 2 && l % 2 == 0 => {
            Ok(strip_preset(l, l, l / 2, Reading::CylinderDc))
        }
        BoundaryCondition::PeriodicIC if l >= 2 && l % 2 == 0 => Ok(square_preset(
            l,
            l / 2,
            Reading::DiskIc,
            false,
        )),
        BoundaryCondition::PeriodicOdd if l >= 3 && l % 2 == 1 => Ok(square_preset(
            2 * l,
            l,
            Reading::HalfTurnFold,
            true,
        )),
        _ => Err(Error::UnsupportedSector {
            l,
            bc: bc.flag().into(),
            defects: l % 2,
        }),
    }
}

/// Occupies alternate stubs along left (top to bottom), bottom (left to
/// right) and right (bottom to top); the top side is vacant for the even
/// strip and free otherwise.
fn strip_preset(l: usize, w: usize, h: usize, reading: Reading) -> GridSpec {
    let mut walk = Vec::new();
    for r in 0..h {
        walk.push(Stub::Left(r));
    }
    for c in 0..w {
        walk.push(Stub::Bottom(c));
    }
    for r in (0..h).rev() {
        walk.push(Stub::Right(r));
    }
    let mut stubs = BTreeMap::new();
    let mut next_site = 1u16;
    for (k, &stub) in walk.iter().enumerate() {
        let state = if k % 2 == 0 {
            let s = StubState::Site(next_site);
            next_site += 1;
            s
        } else {
            StubState::Vacant
        };
        stubs.insert(stub, state);
    }
    assert_eq!(next_site as usize - 1, l, "terminal count must equal L");
    let top_free = reading != Reading::ClosedStrip;
    let mut free_order = Vec::new();
    for c in 0..w {
        let st = if top_free {
            let id = l as u16 + c as u16 + 1;
            free_order.push(id);
            StubState::Free(id)
        } else {
            StubState::Vacant
        };
        stubs.insert(Stub::Top(c), st);
    }
    let bc = match reading {
        Reading::CylinderDc => BoundaryCondition::PeriodicDC,
        _ => BoundaryCondition::Closed,
    };
    GridSpec {
        width: w,
        height: h,
        l,
        bc,
        reading,
        stubs,
        free_order,
        half_turn_symmetric: false,
        paired_tops: reading == Reading::CylinderDc,
        site_count: l,
    }
}

/// Alternating stubs around the full perimeter of an n x n grid, walked
/// counterclockwise from the top-left corner: left, bottom, right, top.
fn square_preset(terminals: usize, n: usize, reading: Reading, hts: bool) -> GridSpec {
    let mut walk = Vec::new();
    for r in 0..n {
        walk.push(Stub::Left(r));
    }
    for c in 0..n {
        walk.push(Stub::Bottom(c));
    }
    for r in (0..n).rev() {
        walk.push(Stub::Right(r));
    }
    for c in (0..n).rev() {
        walk.push(Stub::Top(c));
    }
    let mut stubs = BTreeMap::new();
    let mut next = 1u16;
    for (k, &stub) in walk.iter().enumerate() {
        let state = if k % 2 == 0 {
            let s = StubState::Site(next);
            next += 1;
            s
        } else {
            StubState::Vacant
        };
        stubs.insert(stub, state);
    }
    assert_eq!(next as usize - 1, terminals);
    let (l, bc) = match reading {
        Reading::DiskIc => (terminals, BoundaryCondition::PeriodicIC),
        _ => (terminals / 2, BoundaryCondition::PeriodicOdd),
    };
    GridSpec {
        width: n,
        height: n,
        l,
        bc,
        reading,
        stubs,
        free_order: Vec::new(),
        half_turn_symmetric: hts,
        paired_tops: false,
        site_count: terminals,
    }
}

// ---------------------------------------------------------------------------
// grid plumbing shared by both engines

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Port {
    Vertex(usize),
    Ext(Stub),
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    a: Port,
    b: Port,
}

struct Wiring {
    edges: Vec<Edge>,
    /// incident edge ids per vertex
    incident: Vec<Vec<usize>>,
    /// image of each edge under half-turn rotation
    rotated: Vec<usize>,
}

fn build_wiring(spec: &GridSpec) -> Wiring {
    let (w, h) = (spec.width, spec.height);
    let vid = |r: usize, c: usize| r * w + c;
    let mut edges = Vec::new();
    for r in 0..h {
        for c in 0..w {
            let v = Port::Vertex(vid(r, c));
            if r == 0 {
                edges.push(Edge { a: Port::Ext(Stub::Top(c)), b: v });
            }
            if c == 0 {
                edges.push(Edge { a: Port::Ext(Stub::Left(r)), b: v });
            }
            let right = if c + 1 < w {
                Port::Vertex(vid(r, c + 1))
            } else {
                Port::Ext(Stub::Right(r))
            };
            edges.push(Edge { a: v, b: right });
            let down = if r + 1 < h {
                Port::Vertex(vid(r + 1, c))
            } else {
                Port::Ext(Stub::Bottom(c))
            };
            edges.push(Edge { a: v, b: down });
        }
    }
    let mut incident = vec![Vec::new(); w * h];
    for (id, e) in edges.iter().enumerate() {
        for p in [e.a, e.b] {
            if let Port::Vertex(v) = p {
                incident[v].push(id);
            }
        }
    }
    // 180-degree rotation map
    let rot_port = |p: Port| -> Port {
        match p {
            Port::Vertex(v) => {
                let (r, c) = (v / w, v % w);
                Port::Vertex(vid(h - 1 - r, w - 1 - c))
            }
            Port::Ext(s) => Port::Ext(match s {
                Stub::Left(r) => Stub::Right(h - 1 - r),
                Stub::Right(r) => Stub::Left(h - 1 - r),
                Stub::Top(c) => Stub::Bottom(w - 1 - c),
                Stub::Bottom(c) => Stub::Top(w - 1 - c),
            }),
        }
    };
    let key = |e: &Edge| {
        let mut k = [format!("{:?}", e.a), format!("{:?}", e.b)];
        k.sort();
        k.join("|")
    };
    let by_key: BTreeMap<String, usize> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| (key(e), i))
        .collect();
    let rotated = edges
        .iter()
        .map(|e| {
            let img = Edge { a: rot_port(e.a), b: rot_port(e.b) };
            by_key[&key(&img)]
        })
        .collect();
    Wiring { edges, incident, rotated }
}

fn terminal_of(spec: &GridSpec, stub: Stub) -> Option<u16> {
    match spec.stubs.get(&stub) {
        Some(StubState::Site(t)) => Some(*t),
        Some(StubState::Free(t)) => Some(*t),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// DFS oracle engine

struct Dfs<'a> {
    spec: &'a GridSpec,
    wiring: &'a Wiring,
    value: Vec<Option<bool>>,
    occ: Vec<u8>,
    undecided: Vec<u8>,
    enforce_hts: bool,
    top_edge_ids: BTreeMap<usize, usize>,
    matchings: BTreeMap<Vec<(u16, u16)>, BigUint>,
}

impl<'a> Dfs<'a> {
    fn run(spec: &'a GridSpec, wiring: &'a Wiring, enforce_hts: bool) -> BTreeMap<Vec<(u16, u16)>, BigUint> {
        let ne = wiring.edges.len();
        let nv = spec.width * spec.height;
        let mut undecided = vec![0u8; nv];
        for v in 0..nv {
            undecided[v] = wiring.incident[v].len() as u8;
        }
        let mut top_edge_ids = BTreeMap::new();
        for (id, e) in wiring.edges.iter().enumerate() {
            for p in [e.a, e.b] {
                if let Port::Ext(Stub::Top(c)) = p {
                    top_edge_ids.insert(c, id);
                }
            }
        }
        let mut dfs = Dfs {
            spec,
            wiring,
            value: vec![None; ne],
            occ: vec![0; nv],
            undecided,
            enforce_hts,
            top_edge_ids,
            matchings: BTreeMap::new(),
        };
        dfs.step(0);
        dfs.matchings
    }

    fn forced(&self, id: usize) -> Option<bool> {
        let e = &self.wiring.edges[id];
        for p in [e.a, e.b] {
            if let Port::Ext(stub) = p {
                match self.spec.stubs[&stub] {
                    StubState::Site(_) => return Some(true),
                    StubState::Vacant => return Some(false),
                    StubState::Free(_) => {}
                }
            }
        }
        if self.enforce_hts {
            let img = self.wiring.rotated[id];
            if img != id {
                if let Some(v) = self.value[img] {
                    return Some(v);
                }
            }
        }
        if self.spec.paired_tops {
            for p in [e.a, e.b] {
                if let Port::Ext(Stub::Top(c)) = p {
                    let mirror = self.spec.width - 1 - c;
                    if mirror != c {
                        if let Some(&mid) = self.top_edge_ids.get(&mirror) {
                            if let Some(v) = self.value[mid] {
                                return Some(v);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn step(&mut self, id: usize) {
        if id == self.wiring.edges.len() {
            self.record();
            return;
        }
        let choices: &[bool] = match self.forced(id) {
            Some(true) => &[true],
            Some(false) => &[false],
            None => &[false, true],
        };
        'choice: for &occ in choices {
            let e = self.wiring.edges[id];
            let mut touched = [None, None];
            for (k, p) in [e.a, e.b].into_iter().enumerate() {
                if let Port::Vertex(v) = p {
                    self.undecided[v] -= 1;
                    if occ {
                        self.occ[v] += 1;
                    }
                    touched[k] = Some(v);
                    let bad = self.occ[v] > 2
                        || self.occ[v] + self.undecided[v] < 2
                        || (self.undecided[v] == 0 && self.occ[v] != 2);
                    if bad {
                        // roll back what we already did, then try next choice
                        for t in touched.iter().flatten() {
                            self.undecided[*t] += 1;
                            if occ {
                                self.occ[*t] -= 1;
                            }
                        }
                        continue 'choice;
                    }
                }
            }
            self.value[id] = Some(occ);
            self.step(id + 1);
            self.value[id] = None;
            for t in touched.iter().flatten() {
                self.undecided[*t] += 1;
                if occ {
                    self.occ[*t] -= 1;
                }
            }
        }
    }

    fn record(&mut self) {
        if self.spec.half_turn_symmetric && !self.enforce_hts {
            for (id, img) in self.wiring.rotated.iter().enumerate() {
                if self.value[id] != self.value[*img] {
                    return;
                }
            }
        }
        let matching = extract_matching(self.spec, self.wiring, |id| self.value[id] == Some(true));
        *self
            .matchings
            .entry(matching)
            .or_insert_with(BigUint::zero) += BigUint::one();
    }
}

/// Walks every loop line from an occupied stub to its partner stub and
/// returns the induced matching on terminal ids, sorted canonically.
fn extract_matching(
    spec: &GridSpec,
    wiring: &Wiring,
    occupied: impl Fn(usize) -> bool,
) -> Vec<(u16, u16)> {
    let mut pairs = Vec::new();
    let mut seen = vec![false; wiring.edges.len()];
    for (start, e) in wiring.edges.iter().enumerate() {
        if !occupied(start) || seen[start] {
            continue;
        }
        let (stub, mut at) = match (e.a, e.b) {
            (Port::Ext(s), Port::Vertex(v)) => (s, v),
            (Port::Vertex(v), Port::Ext(s)) => (s, v),
            _ => continue,
        };
        let Some(t0) = terminal_of(spec, stub) else { continue };
        // follow the line through the grid
        seen[start] = true;
        let mut prev_edge = start;
        let t1 = loop {
            let next = wiring.incident[at]
                .iter()
                .copied()
                .find(|&id| id != prev_edge && occupied(id))
                .expect("degree-2 vertex must have a continuation");
            seen[next] = true;
            let e = &wiring.edges[next];
            let other = if e.a == Port::Vertex(at) { e.b } else { e.a };
            match other {
                Port::Vertex(v) => {
                    at = v;
                    prev_edge = next;
                }
                Port::Ext(s) => {
                    break terminal_of(spec, s).expect("line ended on a vacant stub");
                }
            }
        };
        pairs.push((t0.min(t1), t0.max(t1)));
    }
    pairs.sort_unstable();
    pairs
}

/// Dev aid: raw terminal matchings before any reading.
pub fn raw_matchings_dev(spec: &GridSpec) -> Vec<(Vec<(u16, u16)>, BigUint)> {
    let mut out = Vec::new();
    for sub in sub_specs(spec) {
        let wiring = build_wiring(&sub);
        for (m, c) in Dfs::run(&sub, &wiring, false) {
            out.push((m, c));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// reading: terminal matchings -> link states

/// Converts a terminal matching into the sector link state dictated by the
/// preset's reading.
pub fn matching_to_state(spec: &GridSpec, matching: &[(u16, u16)]) -> Result<LinkState> {
    let l = spec.l;
    match spec.reading {
        Reading::ClosedStrip => {
            let arcs: Vec<(usize, usize, bool)> = matching
                .iter()
                .map(|&(a, b)| (a as usize, b as usize, false))
                .collect();
            LinkState::from_parts(l, BoundaryCondition::Closed, &arcs, &[], false)
        }
        Reading::ClosedDefect => {
            let mut arcs = Vec::new();
            let mut defect = None;
            for &(a, b) in matching {
                let a_site = (a as usize) <= l;
                let b_site = (b as usize) <= l;
                match (a_site, b_site) {
                    (true, true) => arcs.push((a as usize, b as usize, false)),
                    (true, false) => defect = Some(a as usize),
                    (false, true) => defect = Some(b as usize),
                    (false, false) => {
                        return Err(Error::Invalid(
                            "strip configuration connects two top stubs".into(),
                        ))
                    }
                }
            }
            let d = defect.ok_or_else(|| Error::Invalid("no defect line".into()))?;
            LinkState::from_parts(l, BoundaryCondition::Closed, &arcs, &[d], false)
        }
        Reading::DiskIc => {
            let arcs: Vec<(usize, usize, bool)> = matching
                .iter()
                .map(|&(a, b)| (a as usize, b as usize, false))
                .collect();
            LinkState::from_parts(l, BoundaryCondition::PeriodicIC, &arcs, &[], false)
        }
        Reading::CylinderDc => dc_state(spec, matching),
        Reading::HalfTurnFold => half_turn_state(spec, matching),
    }
}

/// Cylinder reading: close the used top stubs with nested arcs over the top
/// of the diagram (for a column-symmetric exit set this is the pairing
/// c <-> w-1-c induced by viewing the grid as the fundamental domain of a
/// half-turn symmetric square), then trace composite connections. Every
/// traversal of a closure arc crosses the seam once, so an arc with an odd
/// count is a seam arc. The sector states satisfy the parity invariant
/// "seam arcs + loops even", which pins the non-contractible loop flag to
/// the parity of the seam-arc count; top-to-top cycles do not affect it.
fn dc_state(spec: &GridSpec, matching: &[(u16, u16)]) -> Result<LinkState> {
    let l = spec.l;
    let mut partner: BTreeMap<u16, u16> = BTreeMap::new();
    for &(a, b) in matching {
        partner.insert(a, b);
        partner.insert(b, a);
    }
    // used top stubs in top-edge order
    let used: Vec<u16> = spec
        .free_order
        .iter()
        .copied()
        .filter(|t| partner.contains_key(t))
        .collect();
    if used.len() % 2 != 0 {
        return Err(Error::Invalid("odd number of seam exits".into()));
    }
    let mut closure: BTreeMap<u16, u16> = BTreeMap::new();
    for k in 0..used.len() / 2 {
        let (x, y) = (used[k], used[used.len() - 1 - k]);
        closure.insert(x, y);
        closure.insert(y, x);
    }
    let mut seen: std::collections::BTreeSet<u16> = std::collections::BTreeSet::new();
    let mut arcs = Vec::new();
    let mut seam_arcs = 0usize;
    // site-to-site composites: follow loop lines, hopping closure arcs
    for site in 1..=l as u16 {
        if seen.contains(&site) {
            continue;
        }
        seen.insert(site);
        let mut crossings = 0usize;
        let mut cur = partner[&site];
        while cur > l as u16 {
            seen.insert(cur);
            let hop = closure[&cur];
            crossings += 1;
            seen.insert(hop);
            cur = partner[&hop];
        }
        seen.insert(cur);
        let (x, y) = (site.min(cur), site.max(cur));
        let seam = crossings % 2 == 1;
        arcs.push((x as usize, y as usize, seam));
        seam_arcs += seam as usize;
    }
    let noncontractible = seam_arcs % 2 == 1;
    LinkState::from_parts(l, BoundaryCondition::PeriodicDC, &arcs, &[], noncontractible)
}

/// Fold a half-turn symmetric matching on 2L terminals down to L cylinder
/// sites; the path between antipodal terminals becomes the defect.
fn half_turn_state(spec: &GridSpec, matching: &[(u16, u16)]) -> Result<LinkState> {
    let l = spec.l;
    let mut arcs: Vec<(usize, usize, bool)> = Vec::new();
    let mut defect = None;
    for &(a, b) in matching {
        let fa = (a as usize - 1) % l + 1;
        let fb = (b as usize - 1) % l + 1;
        if fa == fb {
            if defect.replace(fa).is_some_and(|d| d != fa) {
                return Err(Error::Invalid("two defect diameters".into()));
            }
        } else {
            let arc = (fa.min(fb), fa.max(fb), false);
            if !arcs.contains(&arc) {
                arcs.push(arc);
            }
        }
    }
    let d = defect.ok_or_else(|| Error::Invalid("no diameter path".into()))?;
    LinkState::from_parts(l, BoundaryCondition::PeriodicOdd, &arcs, &[d], false)
}

// ---------------------------------------------------------------------------
// public enumeration entry points

const MAX_SITES: usize = 24;

/// The defect-exit preset enumerates one top stub at a time; everything else
/// runs on the spec as given.
pub(crate) fn sub_specs(spec: &GridSpec) -> Vec<GridSpec> {
    if spec.reading != Reading::ClosedDefect {
        return vec![spec.clone()];
    }
    (0..spec.width)
        .map(|exit| {
            let mut sub = spec.clone();
            sub.free_order.clear();
            for c in 0..spec.width {
                let st = if c == exit {
                    let id = spec.l as u16 + 1;
                    sub.free_order.push(id);
                    StubState::Site(id)
                } else {
                    StubState::Vacant
                };
                sub.stubs.insert(Stub::Top(c), st);
            }
            sub
        })
        .collect()
}

/// Exhaustive DFS engine (the oracle).
pub fn enumerate_fpl_dfs(spec: &GridSpec) -> Result<ConnectivityTally> {
    if spec.site_count > MAX_SITES {
        return Err(Error::BoundExceeded(spec.site_count, MAX_SITES));
    }
    let mut tally = ConnectivityTally::default();
    for sub in sub_specs(spec) {
        let wiring = build_wiring(&sub);
        let raw = Dfs::run(&sub, &wiring, false);
        for (matching, count) in raw {
            let state = matching_to_state(&sub, &matching)?;
            tally.add_counted(state, count);
        }
    }
    Ok(tally)
}

/// DFS with the half-turn constraint enforced during the search instead of
/// filtered at the leaves (a fundamental-domain search: each edge pair is
/// decided once). Identical to the oracle on non-symmetric presets.
pub fn enumerate_fpl_symmetric(spec: &GridSpec) -> Result<ConnectivityTally> {
    if spec.site_count > MAX_SITES {
        return Err(Error::BoundExceeded(spec.site_count, MAX_SITES));
    }
    let mut tally = ConnectivityTally::default();
    for sub in sub_specs(spec) {
        let wiring = build_wiring(&sub);
        let raw = Dfs::run(&sub, &wiring, sub.half_turn_symmetric);
        for (matching, count) in raw {
            let state = matching_to_state(&sub, &matching)?;
            tally.add_counted(state, count);
        }
    }
    Ok(tally)
}

/// Both engines, cross-checked; the conjecture-facing entry point.
pub fn enumerate_fpl(spec: &GridSpec) -> Result<ConnectivityTally> {
    let dfs = enumerate_fpl_dfs(spec)?;
    let dp = crate::fpl_dp::enumerate_fpl_dp(spec)?;
    if dfs.by_state != dp.by_state {
        return Err(Error::EnginesDisagree(format!(
            "{}x{} {}",
            spec.width,
            spec.height,
            spec.bc.flag()
        )));
    }
    Ok(dfs)
}

// ---------------------------------------------------------------------------
// conjecture verification

/// Per-state comparison of an FPL tally with the exact stationary vector.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub l: usize,
    pub bc: String,
    pub states: usize,
    pub total_matches: bool,
    pub mismatches: Vec<String>,
    pub pass: bool,
}

pub fn verify_conjecture(l: usize, bc: BoundaryCondition) -> Result<ConjectureReport> {
    use crate::link::enumerate_sector;
    use crate::markov::{build_intensity_matrix, stationary_vector};

    let defects = if bc == BoundaryCondition::Closed { l % 2 } else { l % 2 };
    let basis = enumerate_sector(l, bc, defects)?;
    let h = build_intensity_matrix(&basis)?;
    let v = stationary_vector(&h)?;
    let spec = preset_grid(l, bc)?;
    let tally = enumerate_fpl(&spec)?;

    let mut mismatches = Vec::new();
    for (state, entry) in basis.states().iter().zip(&v.entries) {
        let key = state.to_string();
        let got = tally.get(&key);
        if got != *entry {
            mismatches.push(format!("{key}: stationary {entry}, fpl {got}"));
        }
    }
    for key in tally.by_state.keys() {
        if basis.position(&tally.states[key]).is_none() {
            mismatches.push(format!("{key}: configuration outside the sector"));
        }
    }
    let total_matches = tally.total() == v.sum;
    if !total_matches {
        mismatches.push(format!("total {} vs S {}", tally.total(), v.sum));
    }
    Ok(ConjectureReport {
        l,
        bc: bc.flag().into(),
        states: basis.len(),
        total_matches,
        pass: mismatches.is_empty(),
        mismatches,
    })
}
