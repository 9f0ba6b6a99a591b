//! Comb layout of a monotone planar formula on the grid and the cell
//! painter shared by both compilers.
//!
//! Variables sit on a horizontal line in cycle order, `VAR_SPACING` columns
//! apart. Positive clauses hang above the line and negative ones below,
//! each as a horizontal bar at a height given by its nesting depth, joined
//! to its variables by vertical requester wires ("legs"). A variable with
//! two positive occurrences gets two legs, three columns either side of its
//! own column.
//!
//! The painter records requester wires, movement tracks and forced-empty
//! cells; every other cell of the bounding box that does not touch a
//! requester becomes a provider. Requester wires are therefore isolated by
//! construction, and providers fill whatever space is left.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Cell, CmapfError, GridEnvironment, Result};
use crate::sat_core::{is_linear, Cnf, Literal, Var};

pub(crate) const VAR_SPACING: i32 = 16;
/// Height step between nesting levels of clause bars.
pub(crate) const LEVEL_STEP: i32 = 12;
/// Offset of the two legs of a doubly occurring positive literal.
pub(crate) const PORT_OFFSET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Immobile agent that is part of the connected backbone.
    Provider,
    /// Immobile agent that must be reached by some mobile agent.
    Requester,
    Mobile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub name: String,
    pub role: Role,
    pub start: Cell,
    pub target: Cell,
}

/// Agents of a compiled instance with their roles, plus named cell regions
/// of the gadgets (switch positions, literal positions, the line, ...).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GadgetLayout {
    pub agents: Vec<AgentSpec>,
    pub regions: BTreeMap<String, Vec<Cell>>,
}

impl GadgetLayout {
    pub fn agent(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a.name == name)
    }

    pub fn region(&self, name: &str) -> &[Cell] {
        self.regions.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn start(&self) -> Vec<Cell> {
        self.agents.iter().map(|a| a.start).collect()
    }

    pub fn target(&self) -> Vec<Cell> {
        self.agents.iter().map(|a| a.target).collect()
    }

    pub fn mobile(&self) -> impl Iterator<Item = usize> + '_ {
        self.agents.iter().enumerate().filter(|(_, a)| a.role == Role::Mobile).map(|(i, _)| i)
    }
}

/// Cells of a painted layout by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LayoutCells {
    pub requesters: BTreeSet<Cell>,
    pub tracks: BTreeSet<Cell>,
    pub providers: BTreeSet<Cell>,
}

/// Where a clause is drawn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ClausePlacement {
    /// `+1` above the variable line, `-1` below.
    pub side: i32,
    /// Height of the literal agents' wire-side cells, counted away from the
    /// line.
    pub base: i32,
    /// Literals with their leg columns, left to right.
    pub legs: Vec<(Literal, i32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Comb {
    /// Variables left to right.
    pub order: Vec<Var>,
    pub column: Vec<i32>,
    pub clauses: Vec<ClausePlacement>,
    /// Per variable, clauses using it positively and negatively.
    pub positive: Vec<Vec<usize>>,
    pub negative: Vec<Vec<usize>>,
}

impl Comb {
    /// Leg column of clause `ci` at variable `v`.
    pub fn leg(&self, ci: usize, v: Var) -> i32 {
        self.clauses[ci].legs.iter().find(|(l, _)| l.var == v).expect("clause uses the variable").1
    }
}

/// Lays the formula out along `cycle`, cut between its last and first
/// variables. Requires at most two positive and one negative occurrence per
/// variable, and clauses of one polarity that do not cross along the cycle.
pub(crate) fn comb(cnf: &Cnf, cycle: &[Var], first_base: i32) -> Result<Comb> {
    let n = cnf.num_vars();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in cycle.iter().enumerate() {
        pos[v] = i;
    }
    if cycle.len() != n || pos.contains(&usize::MAX) {
        return Err(CmapfError::InvalidLayout("cycle is not a permutation of the variables".into()));
    }
    let column: Vec<i32> = (0..n).map(|v| pos[v] as i32 * VAR_SPACING).collect();
    let mut positive = vec![Vec::new(); n];
    let mut negative = vec![Vec::new(); n];
    for (ci, c) in cnf.clauses().iter().enumerate() {
        if c.is_empty() {
            return Err(CmapfError::InvalidLayout(format!("clause {ci} is empty")));
        }
        let polarity = c.iter().next().expect("nonempty").positive;
        if c.iter().any(|l| l.positive != polarity) {
            return Err(CmapfError::InvalidLayout(format!("clause {ci} mixes polarities")));
        }
        for l in c {
            let occ = if l.positive { &mut positive } else { &mut negative };
            occ[l.var].push(ci);
        }
    }
    for v in 0..n {
        if positive[v].len() > 2 || negative[v].len() > 1 {
            return Err(CmapfError::OccurrenceBoundViolated(format!(
                "{} occurs {} times positively and {} times negatively",
                cnf.name(v),
                positive[v].len(),
                negative[v].len()
            )));
        }
    }
    if !is_linear(cnf) {
        return Err(CmapfError::InvalidLayout("formula is not linear".into()));
    }

    let sets: Vec<BTreeSet<usize>> = cnf.clauses().iter().map(|c| c.iter().map(|l| pos[l.var]).collect()).collect();
    let side: Vec<i32> =
        cnf.clauses().iter().map(|c| if c.iter().next().expect("nonempty").positive { 1 } else { -1 }).collect();
    let m = sets.len();
    for a in 0..m {
        for b in a + 1..m {
            if side[a] == side[b] && (spreads(&sets[a], &sets[b]) || spreads(&sets[b], &sets[a])) {
                return Err(CmapfError::InvalidLayout(format!("clauses {a} and {b} cross along the cycle")));
            }
        }
    }
    let span = |s: &BTreeSet<usize>| (*s.first().expect("nonempty"), *s.last().expect("nonempty"));
    let inside = |a: usize, b: usize| {
        let ((lo_a, hi_a), (lo_b, hi_b)) = (span(&sets[a]), span(&sets[b]));
        a != b && side[a] == side[b] && lo_b <= lo_a && hi_a <= hi_b && (lo_a, hi_a) != (lo_b, hi_b)
    };
    let mut by_width: Vec<usize> = (0..m).collect();
    by_width.sort_by_key(|&a| {
        let (lo, hi) = span(&sets[a]);
        (hi - lo, a)
    });
    let mut depth = vec![1i32; m];
    for &a in &by_width {
        depth[a] = 1 + (0..m).filter(|&b| inside(b, a)).map(|b| depth[b]).max().unwrap_or(0);
    }

    // Leg columns: order the clauses meeting at a variable so that legs do
    // not cross the bars of their neighbours.
    let mut legs: Vec<Vec<(Literal, i32)>> = vec![Vec::new(); m];
    for v in 0..n {
        for occ in [&positive[v], &negative[v]] {
            let p = pos[v];
            let mut ordered: Vec<usize> = occ.clone();
            ordered.sort_by_key(|&ci| {
                let (lo, hi) = span(&sets[ci]);
                let width = (hi - lo) as i64;
                match (lo == p, hi == p) {
                    (false, true) => (0, width, ci),
                    (true, false) => (2, -width, ci),
                    _ => (1, 0, ci),
                }
            });
            let x = column[v];
            let cols: &[i32] = if ordered.len() == 2 { &[x - PORT_OFFSET, x + PORT_OFFSET] } else { &[x] };
            for (&ci, &col) in ordered.iter().zip(cols) {
                let lit = *cnf.clauses()[ci].iter().find(|l| l.var == v).expect("occurrence");
                legs[ci].push((lit, col));
            }
        }
    }
    let clauses = legs
        .into_iter()
        .enumerate()
        .map(|(ci, mut l)| {
            l.sort_by_key(|&(_, c)| c);
            ClausePlacement { side: side[ci], base: first_base + (depth[ci] - 1) * LEVEL_STEP, legs: l }
        })
        .collect();
    Ok(Comb { order: cycle.to_vec(), column, clauses, positive, negative })
}

/// Whether the elements of `b` outside `a` fall into two different gaps of
/// `a`, the gap wrapping around the ends counting as one.
fn spreads(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
    let gaps: BTreeSet<usize> = b
        .iter()
        .filter(|x| !a.contains(x))
        .map(|x| {
            let below = a.range(..x).count();
            if below == a.len() {
                0
            } else {
                below
            }
        })
        .collect();
    gaps.len() > 1
}

/// Accumulates the cells of a compiled instance.
#[derive(Debug, Default)]
pub(crate) struct Painter {
    /// Requester cell to wire id.
    requesters: BTreeMap<Cell, usize>,
    wires: usize,
    tracks: BTreeSet<Cell>,
    moves: Vec<(Cell, Cell)>,
    voids: BTreeSet<Cell>,
    mobile: Vec<(String, Cell, Cell)>,
    pub regions: BTreeMap<String, Vec<Cell>>,
}

impl Painter {
    pub fn new_wire(&mut self) -> usize {
        self.wires += 1;
        self.wires - 1
    }

    pub fn requester(&mut self, wire: usize, c: Cell) -> Result<()> {
        if self.tracks.contains(&c) || self.requesters.insert(c, wire).is_some_and(|w| w != wire) {
            return Err(CmapfError::InvalidLayout(format!("cell {c:?} painted twice")));
        }
        Ok(())
    }

    /// Straight requester segment from `a` to `b` inclusive.
    pub fn segment(&mut self, wire: usize, a: Cell, b: Cell) -> Result<()> {
        let (dx, dy) = ((b.0 - a.0).signum(), (b.1 - a.1).signum());
        if dx != 0 && dy != 0 {
            return Err(CmapfError::InvalidLayout("diagonal segment".into()));
        }
        let mut c = a;
        loop {
            self.requester(wire, c)?;
            if c == b {
                return Ok(());
            }
            c = (c.0 + dx, c.1 + dy);
        }
    }

    /// A movement track visiting `cells` in order. Tracks may share cells.
    pub fn track(&mut self, cells: &[Cell]) -> Result<()> {
        for &c in cells {
            self.tracks.insert(c);
            if self.requesters.contains_key(&c) {
                return Err(CmapfError::InvalidLayout(format!("cell {c:?} painted twice")));
            }
        }
        self.moves.extend(cells.windows(2).map(|w| (w[0], w[1])));
        Ok(())
    }

    pub fn void(&mut self, c: Cell) {
        self.voids.insert(c);
    }

    pub fn mobile(&mut self, name: impl Into<String>, start: Cell, target: Cell) {
        self.mobile.push((name.into(), start, target));
    }

    pub fn region(&mut self, name: impl Into<String>, cells: Vec<Cell>) {
        self.regions.insert(name.into(), cells);
    }

    /// Fills the background with providers and returns the environment and
    /// the layout with mobile agents first, then requesters, then providers.
    pub fn finish(self) -> Result<(GridEnvironment, GadgetLayout, LayoutCells)> {
        let n4 = |(x, y): Cell| [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)];
        for (&c, &w) in &self.requesters {
            if let Some(d) = n4(c).into_iter().find(|d| self.requesters.get(d).is_some_and(|&v| v != w)) {
                return Err(CmapfError::InvalidLayout(format!("requester wires touch at {c:?} and {d:?}")));
            }
        }
        let all: Vec<Cell> = self.requesters.keys().chain(&self.tracks).copied().collect();
        let (x0, x1) = (all.iter().map(|c| c.0).min().unwrap_or(0) - 2, all.iter().map(|c| c.0).max().unwrap_or(0) + 2);
        let (y0, y1) = (all.iter().map(|c| c.1).min().unwrap_or(0) - 2, all.iter().map(|c| c.1).max().unwrap_or(0) + 2);
        let mut providers = BTreeSet::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let c = (x, y);
                let taken = self.requesters.contains_key(&c) || self.tracks.contains(&c) || self.voids.contains(&c);
                if !taken && !n4(c).iter().any(|d| self.requesters.contains_key(d)) {
                    providers.insert(c);
                }
            }
        }
        let requesters: BTreeSet<Cell> = self.requesters.keys().copied().collect();
        let cells: BTreeSet<Cell> = requesters.iter().chain(&self.tracks).chain(&providers).copied().collect();
        let env = GridEnvironment::new(cells, self.moves, 1)?;
        let mut agents: Vec<AgentSpec> = self
            .mobile
            .into_iter()
            .map(|(name, start, target)| AgentSpec { name, role: Role::Mobile, start, target })
            .collect();
        for (role, set) in [(Role::Requester, &requesters), (Role::Provider, &providers)] {
            let tag = if role == Role::Requester { "r" } else { "p" };
            agents.extend(set.iter().map(|&c| AgentSpec {
                name: format!("{tag}{},{}", c.0, c.1),
                role,
                start: c,
                target: c,
            }));
        }
        let layout = GadgetLayout { agents, regions: self.regions };
        Ok((env, layout, LayoutCells { requesters, tracks: self.tracks, providers }))
    }
}

/// Reflects a cell for the side of the line a gadget sits on.
pub(crate) fn at(side: i32, x: i32, y: i32) -> Cell {
    (x, side * y)
}

/// Cells of one clause bar, shared by both compilers.
pub(crate) struct ClauseCells {
    /// Per literal: wire-side cell and centre-side cell.
    pub literals: Vec<(Literal, Cell, Cell)>,
    /// Cell next to the central requester on the far side, for the gate.
    pub corner: i32,
}

/// Paints the legs' last cells, the literal tracks and the central
/// requester of a clause. Legs are painted by the caller up to `base - 1`.
pub(crate) fn paint_clause_bar(p: &mut Painter, cl: &ClausePlacement, name: &str) -> Result<ClauseCells> {
    let (s, h) = (cl.side, cl.base);
    let central = p.new_wire();
    let mut literals = Vec::new();
    for &(lit, col) in &cl.legs {
        let (near, far) = (at(s, col, h), at(s, col, h + 1));
        p.track(&[near, far])?;
        p.requester(central, at(s, col, h + 2))?;
        literals.push((lit, near, far));
    }
    let (lo, hi) = (cl.legs[0].1, cl.legs[cl.legs.len() - 1].1);
    p.segment(central, at(s, lo, h + 3), at(s, hi, h + 3))?;
    p.region(format!("{name}:central"), (lo..=hi).map(|c| at(s, c, h + 3)).collect());
    Ok(ClauseCells { literals, corner: hi })
}

/// Paints the positive wiring of `v` from row `y0` up to its clauses' legs:
/// a single wire for one occurrence, or a short wire, a split track and two
/// branches for two. Returns the split track (near, far) if there is one.
pub(crate) fn paint_positive_fanout(p: &mut Painter, comb: &Comb, v: Var, y0: i32) -> Result<Option<(Cell, Cell)>> {
    let x = comb.column[v];
    let top = |ci: usize| comb.clauses[ci].base - 1;
    match comb.positive[v].as_slice() {
        [] => Ok(None),
        &[ci] => {
            let w = p.new_wire();
            p.segment(w, (x, y0), (x, top(ci)))?;
            Ok(None)
        }
        &[a, b] => {
            let (left, right) = if comb.leg(a, v) < comb.leg(b, v) { (a, b) } else { (b, a) };
            let lower = p.new_wire();
            p.segment(lower, (x, y0), (x, y0 + 1))?;
            let (near, far) = ((x, y0 + 2), (x, y0 + 3));
            p.track(&[near, far])?;
            let w1 = p.new_wire();
            p.segment(w1, (x - 1, y0 + 3), (x - PORT_OFFSET, y0 + 3))?;
            p.segment(w1, (x - PORT_OFFSET, y0 + 4), (x - PORT_OFFSET, top(left)))?;
            let w2 = p.new_wire();
            p.segment(w2, (x, y0 + 4), (x, y0 + 5))?;
            p.segment(w2, (x + 1, y0 + 5), (x + PORT_OFFSET, y0 + 5))?;
            p.segment(w2, (x + PORT_OFFSET, y0 + 6), (x + PORT_OFFSET, top(right)))?;
            Ok(Some((near, far)))
        }
        _ => unreachable!("occurrence bound checked by the layout"),
    }
}

/// Paints the negative leg of `v` from row `-y0` down to its clause.
pub(crate) fn paint_negative_leg(p: &mut Painter, comb: &Comb, v: Var, y0: i32) -> Result<()> {
    if let &[ci] = comb.negative[v].as_slice() {
        let x = comb.column[v];
        let w = p.new_wire();
        p.segment(w, (x, -y0), (x, -(comb.clauses[ci].base - 1)))?;
    }
    Ok(())
}
