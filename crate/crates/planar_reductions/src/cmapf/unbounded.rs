//! Unbounded compiler: flip sequences become executions.
//!
//! Variable agents sit at the top (true) or bottom (false) of a vertical
//! track that crosses a horizontal corridor, the "line". While crossing, a
//! variable agent is connected only through a line agent standing next to
//! it. The line holds one agent per variable and one isolated requester per
//! gap between consecutive variables, each reachable only from its corridor
//! cell, so all line agents but one are pinned. The free one walks to
//! whichever variable flips, taking over a requester from a pinned agent
//! whenever it needs to pass one.
//!
//! Between a variable's track and its wires sit connector agents with two
//! positions: next to the variable (feeding the wire below them while the
//! variable is away) or next to the wire above (feeding the clause side).

use std::collections::BTreeSet;

use super::layout::{
    comb, paint_clause_bar, paint_negative_leg, paint_positive_fanout, Comb, GadgetLayout, LayoutCells, Painter,
    VAR_SPACING,
};
use super::{AgentConfiguration, Cell, CmapfError, Execution, FastValidator, GridEnvironment, MapInstance, Result};
use crate::reconfig::{apply_flips, validate_flip_sequence};
use crate::sat_core::{Assignment, Cnf, Var};
use crate::sat_reduce::MlpInstance;

const FIRST_BASE: i32 = 16;
/// Corridor cells beyond the outermost variables.
const LINE_OVERHANG: i32 = 4;
/// Cap on the placements enumerated by [`line_placements_all_set`].
const PLACEMENT_CAP: u128 = 2_000_000;

#[derive(Debug, Clone)]
pub struct UnboundedInstance {
    pub env: GridEnvironment,
    pub start: AgentConfiguration,
    pub target: AgentConfiguration,
    pub layout: GadgetLayout,
    pub cells: LayoutCells,
    pub from: Assignment,
    pub to: Assignment,
    cnf: Cnf,
    comb: Comb,
}

pub fn compile_unbounded(inst: &MlpInstance, from: &[bool], to: &[bool]) -> Result<UnboundedInstance> {
    compile_unbounded_formula(&inst.cnf, &inst.cycle, from, to)
}

/// Formula-level entry point, accepting one-variable formulas as well.
pub fn compile_unbounded_formula(cnf: &Cnf, cycle: &[Var], from: &[bool], to: &[bool]) -> Result<UnboundedInstance> {
    for (nu, which) in [(from, "start"), (to, "target")] {
        if nu.len() != cnf.num_vars() || !cnf.satisfied_by(nu) {
            return Err(CmapfError::EndpointUnsat(which));
        }
    }
    let comb = comb(cnf, cycle, FIRST_BASE)?;
    let n = cnf.num_vars() as i32;
    let mut p = Painter::default();

    let (left, right) = (-LINE_OVERHANG, (n - 1) * VAR_SPACING + LINE_OVERHANG);
    let line: Vec<Cell> = (left..=right).map(|x| (x, 0)).collect();
    p.track(&line)?;
    p.region("line", line);
    let pins: Vec<Cell> = (1..n).map(|i| ((i - 1) * VAR_SPACING + VAR_SPACING / 2, 0)).collect();
    for &(x, _) in &pins {
        let w = p.new_wire();
        p.requester(w, (x, 1))?;
    }
    for (j, &home) in pins.iter().chain([&(right, 0)]).enumerate() {
        p.mobile(format!("line:{j}"), home, home);
    }
    p.region("line:pins", pins);

    for v in 0..cnf.num_vars() {
        let x = comb.column[v];
        let (top, mid, bottom) = ((x, 1), (x, 0), (x, -1));
        let side = |nu: &[bool]| if nu[v] { top } else { bottom };
        p.track(&[top, mid, bottom])?;
        p.mobile(format!("var:{v}"), side(from), side(to));
        p.region(format!("var:{v}"), vec![top, mid, bottom]);
        p.region(format!("line:key:{v}"), vec![(x + 1, 0)]);
        // Positive side: short wire, connector, then the fan-out.
        if !comb.positive[v].is_empty() {
            let w = p.new_wire();
            p.segment(w, (x, 2), (x, 3))?;
            let (near, far) = ((x, 4), (x, 5));
            p.track(&[near, far])?;
            let pick = |nu: &[bool]| if nu[v] { far } else { near };
            p.mobile(format!("conn:{v}:top"), pick(from), pick(to));
            p.region(format!("conn:{v}:top"), vec![near, far]);
            if let Some((near, far)) = paint_positive_fanout(&mut p, &comb, v, 6)? {
                let pick = |nu: &[bool]| if nu[v] { far } else { near };
                p.mobile(format!("split:{v}"), pick(from), pick(to));
                p.region(format!("split:{v}"), vec![near, far]);
            }
        }
        if !comb.negative[v].is_empty() {
            let w = p.new_wire();
            p.segment(w, (x, -2), (x, -3))?;
            let (near, far) = ((x, -4), (x, -5));
            p.track(&[near, far])?;
            let pick = |nu: &[bool]| if nu[v] { near } else { far };
            p.mobile(format!("conn:{v}:bottom"), pick(from), pick(to));
            p.region(format!("conn:{v}:bottom"), vec![near, far]);
            paint_negative_leg(&mut p, &comb, v, 6)?;
        }
    }
    for (ci, cl) in comb.clauses.iter().enumerate() {
        let bar = paint_clause_bar(&mut p, cl, &format!("clause:{ci}"))?;
        for &(lit, near, far) in &bar.literals {
            let pick = |nu: &[bool]| if lit.holds(nu) { far } else { near };
            let name = format!("lit:{ci}:{}", lit.var);
            p.mobile(name.clone(), pick(from), pick(to));
            p.region(name, vec![near, far]);
        }
    }
    let (env, layout, cells) = p.finish()?;
    Ok(UnboundedInstance {
        env,
        start: layout.start(),
        target: layout.target(),
        layout,
        cells,
        from: from.to_vec(),
        to: to.to_vec(),
        cnf: cnf.clone(),
        comb,
    })
}

impl UnboundedInstance {
    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    pub fn map(&self) -> MapInstance {
        MapInstance { env: self.env.clone(), agents: self.layout.agents.clone() }
    }

    pub fn line_agents(&self) -> Vec<usize> {
        (0..self.cnf.num_vars()).map(|j| self.agent(&format!("line:{j}"))).collect()
    }

    fn agent(&self, name: &str) -> usize {
        self.layout.agent(name).expect("agent named by the compiler")
    }

    /// Moves `name` to position `k` of its region, if the agent exists.
    fn put(&self, c: &mut AgentConfiguration, name: &str, k: usize) {
        if let Some(a) = self.layout.agent(name) {
            c[a] = self.layout.region(name)[k];
        }
    }
}

/// Line agents not standing next to a line requester.
pub fn free_line_agents(inst: &UnboundedInstance, c: &[Cell]) -> Vec<usize> {
    let pins: BTreeSet<Cell> = inst.layout.region("line:pins").iter().copied().collect();
    inst.line_agents().into_iter().filter(|&a| !pins.contains(&c[a])).collect()
}

/// Every placement of the line agents on the line, all other agents at their
/// start cells, that gives a valid configuration. Line agents are
/// interchangeable, so placements are listed as sorted cell sets.
pub fn line_placements_all_set(inst: &UnboundedInstance) -> Result<Vec<Vec<Cell>>> {
    let line = inst.layout.region("line");
    let agents = inst.line_agents();
    let k = agents.len();
    let combos = (0..k as u128).fold(1u128, |acc, i| acc * (line.len() as u128 - i) / (i + 1));
    if combos > PLACEMENT_CAP {
        return Err(CmapfError::TooLarge { states: combos, cap: PLACEMENT_CAP });
    }
    let movers: BTreeSet<usize> = inst.layout.mobile().collect();
    let fixed: Vec<Cell> = (0..inst.start.len()).filter(|i| !movers.contains(i)).map(|i| inst.start[i]).collect();
    let others: Vec<Cell> = movers.iter().filter(|i| !agents.contains(i)).map(|&i| inst.start[i]).collect();
    let fast = FastValidator::new(&inst.env, &fixed);
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let mut mobile = others.clone();
        mobile.extend(pick.iter().map(|&i| line[i]));
        if fast.valid(&mobile) {
            out.push(pick.iter().map(|&i| line[i]).collect());
        }
        // Next k-combination in lexicographic order.
        let Some(i) = (0..k).rev().find(|&i| pick[i] < line.len() - k + i) else { break };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    Ok(out)
}

/// Execution following a flip sequence from the start assignment; it ends in
/// the target configuration when the sequence ends in the target assignment.
pub fn witness_from_flips(inst: &UnboundedInstance, seq: &[Var]) -> Result<Execution> {
    if !validate_flip_sequence(&inst.cnf, &inst.from, seq) {
        return Err(CmapfError::InvalidWitness("flip sequence leaves the satisfying assignments".into()));
    }
    if apply_flips(&inst.from, seq) != inst.to {
        return Err(CmapfError::InvalidWitness("flip sequence does not reach the target assignment".into()));
    }
    let mut exec = vec![inst.start.clone()];
    let mut nu = inst.from.clone();
    let mut free = inst.agent(&format!("line:{}", inst.cnf.num_vars() - 1));
    for &v in seq {
        let x = format!("var:{v}");
        let pos: Vec<String> = inst.comb.positive[v].iter().map(|ci| format!("lit:{ci}:{v}")).collect();
        let neg: Vec<String> = inst.comb.negative[v].iter().map(|ci| format!("lit:{ci}:{v}")).collect();
        let (top, split, bottom) = (format!("conn:{v}:top"), format!("split:{v}"), format!("conn:{v}:bottom"));
        let step = |exec: &mut Execution, moves: &[(&str, usize)]| {
            let mut c = exec.last().expect("nonempty").clone();
            for &(name, k) in moves {
                inst.put(&mut c, name, k);
            }
            if &c != exec.last().expect("nonempty") {
                exec.push(c);
            }
        };
        let key = inst.layout.region(&format!("line:key:{v}"))[0];
        if nu[v] {
            step(&mut exec, &pos.iter().map(|n| (n.as_str(), 0)).collect::<Vec<_>>());
            step(&mut exec, &[(&split, 0)]);
            step(&mut exec, &[(&top, 0)]);
            let walk = walk_line(inst, &mut exec, &mut free, key);
            step(&mut exec, &[(&x, 1)]);
            step(&mut exec, &[(&x, 2)]);
            step(&mut exec, &[(&bottom, 1)]);
            step(&mut exec, &neg.iter().map(|n| (n.as_str(), 1)).collect::<Vec<_>>());
            walk_back(inst, &mut exec, &mut free, walk);
        } else {
            step(&mut exec, &neg.iter().map(|n| (n.as_str(), 0)).collect::<Vec<_>>());
            step(&mut exec, &[(&bottom, 0)]);
            let walk = walk_line(inst, &mut exec, &mut free, key);
            step(&mut exec, &[(&x, 1)]);
            step(&mut exec, &[(&x, 0)]);
            step(&mut exec, &[(&top, 1)]);
            step(&mut exec, &[(&split, 1)]);
            step(&mut exec, &pos.iter().map(|n| (n.as_str(), 1)).collect::<Vec<_>>());
            walk_back(inst, &mut exec, &mut free, walk);
        }
        nu[v] = !nu[v];
    }
    Ok(exec)
}

/// Line-agent cells before each step of a walk, and the free agent before it.
struct Walk {
    before: Vec<Vec<Cell>>,
    free: usize,
}

/// Moves the free line agent to `key`. To pass a pinned agent, the free
/// agent steps onto its cell while the pinned one steps ahead, which hands
/// the free role over.
fn walk_line(inst: &UnboundedInstance, exec: &mut Execution, free: &mut usize, key: Cell) -> Walk {
    let agents = inst.line_agents();
    let mut walk = Walk { before: Vec::new(), free: *free };
    loop {
        let c = exec.last().expect("nonempty").clone();
        let at = c[*free];
        if at == key {
            return walk;
        }
        walk.before.push(agents.iter().map(|&a| c[a]).collect());
        let dir = (key.0 - at.0).signum();
        let ahead = (at.0 + dir, 0);
        let mover = *free;
        let mut next = c.clone();
        if let Some(&pinned) = agents.iter().find(|&&a| c[a] == ahead) {
            next[pinned] = (ahead.0 + dir, 0);
            *free = pinned;
        }
        next[mover] = ahead;
        exec.push(next);
    }
}

/// Replays a walk backwards, returning every line agent to where it was.
fn walk_back(inst: &UnboundedInstance, exec: &mut Execution, free: &mut usize, walk: Walk) {
    let agents = inst.line_agents();
    for cells in walk.before.into_iter().rev() {
        let mut c = exec.last().expect("nonempty").clone();
        for (&a, &cell) in agents.iter().zip(&cells) {
            c[a] = cell;
        }
        exec.push(c);
    }
    *free = walk.free;
}
