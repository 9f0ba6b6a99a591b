//! Two-step compiler: satisfying assignments become executions of length 2.
//!
//! Each variable agent starts in the middle of a vertical three-cell track
//! and must step up (true) or down (false) at time 1 to feed its wires so
//! that literal agents can leave them. Each clause has a gate agent next to
//! its central requester and a clause agent that must cross a cell reachable
//! only while the gate agent has stepped away from the central requester.
//! The gate agent may do so only when some literal agent has stepped onto the
//! central requester's dips, which in turn needs its leg fed by the variable.

use super::layout::{
    at, comb, paint_clause_bar, paint_negative_leg, paint_positive_fanout, Comb, GadgetLayout, LayoutCells, Painter,
};
use super::{AgentConfiguration, CmapfError, Execution, GridEnvironment, MapInstance, Result};
use crate::sat_core::{Cnf, Var};
use crate::sat_reduce::MlpInstance;

/// Height of the lowest clause bars above the variable line.
const FIRST_BASE: i32 = 16;

#[derive(Debug, Clone)]
pub struct BoundedInstance {
    pub env: GridEnvironment,
    pub start: AgentConfiguration,
    pub target: AgentConfiguration,
    pub bound: usize,
    pub layout: GadgetLayout,
    pub cells: LayoutCells,
    cnf: Cnf,
    comb: Comb,
}

pub fn compile_bounded(inst: &MlpInstance) -> Result<BoundedInstance> {
    compile_bounded_formula(&inst.cnf, &inst.cycle)
}

/// Compiles a monotone linear formula laid out along `cycle` without
/// building the augmented incidence graph, so one-variable formulas are
/// accepted too.
pub fn compile_bounded_formula(cnf: &Cnf, cycle: &[Var]) -> Result<BoundedInstance> {
    let comb = comb(cnf, cycle, FIRST_BASE)?;
    let mut p = Painter::default();
    for v in 0..cnf.num_vars() {
        let x = comb.column[v];
        let (top, mid, bottom) = ((x, 1), (x, 0), (x, -1));
        p.track(&[top, mid, bottom])?;
        p.mobile(format!("var:{v}"), mid, mid);
        p.region(format!("var:{v}"), vec![top, mid, bottom]);
        if let Some((near, far)) = paint_positive_fanout(&mut p, &comb, v, 2)? {
            p.mobile(format!("split:{v}"), near, near);
            p.region(format!("split:{v}"), vec![near, far]);
        }
        paint_negative_leg(&mut p, &comb, v, 2)?;
    }
    for (ci, cl) in comb.clauses.iter().enumerate() {
        let bar = paint_clause_bar(&mut p, cl, &format!("clause:{ci}"))?;
        for &(lit, near, far) in &bar.literals {
            let name = format!("lit:{ci}:{}", lit.var);
            p.mobile(name.clone(), near, near);
            p.region(name, vec![near, far]);
        }
        let (s, h, k) = (cl.side, cl.base, bar.corner);
        let (g0, g1) = (at(s, k, h + 4), at(s, k, h + 5));
        p.track(&[g0, g1])?;
        p.mobile(format!("gate:{ci}"), g0, g0);
        p.region(format!("gate:{ci}"), vec![g0, g1]);
        let (c0, key, c2) = (at(s, k - 1, h + 6), at(s, k, h + 6), at(s, k + 1, h + 6));
        p.track(&[c0, key, c2])?;
        p.void(at(s, k, h + 7));
        p.mobile(format!("clause:{ci}"), c0, c2);
        p.region(format!("clause:{ci}"), vec![c0, key, c2]);
    }
    let (env, layout, cells) = p.finish()?;
    Ok(BoundedInstance {
        env,
        start: layout.start(),
        target: layout.target(),
        bound: 2,
        layout,
        cells,
        cnf: cnf.clone(),
        comb,
    })
}

impl BoundedInstance {
    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    pub fn map(&self) -> MapInstance {
        MapInstance { env: self.env.clone(), agents: self.layout.agents.clone() }
    }

    fn agent(&self, name: &str) -> usize {
        self.layout.agent(name).expect("agent named by the compiler")
    }
}

/// The two-step execution for a satisfying assignment: at time 1 every
/// variable agent sits on its value, one true literal per clause has moved
/// inwards, the gate is open and the clause agent is in the middle cell.
pub fn witness_from_assignment(inst: &BoundedInstance, nu: &[bool]) -> Result<Execution> {
    if nu.len() != inst.cnf.num_vars() || !inst.cnf.satisfied_by(nu) {
        return Err(CmapfError::InvalidWitness("assignment does not satisfy the formula".into()));
    }
    let mut mid = inst.start.clone();
    for (v, &value) in nu.iter().enumerate() {
        let cells = inst.layout.region(&format!("var:{v}"));
        mid[inst.agent(&format!("var:{v}"))] = if value { cells[0] } else { cells[2] };
        if let (true, Some(s)) = (value, inst.layout.agent(&format!("split:{v}"))) {
            mid[s] = inst.layout.region(&format!("split:{v}"))[1];
        }
    }
    for (ci, cl) in inst.comb.clauses.iter().enumerate() {
        let &(lit, _) = cl.legs.iter().find(|(l, _)| l.holds(nu)).expect("clause satisfied");
        let name = format!("lit:{ci}:{}", lit.var);
        mid[inst.agent(&name)] = inst.layout.region(&name)[1];
        mid[inst.agent(&format!("gate:{ci}"))] = inst.layout.region(&format!("gate:{ci}"))[1];
        mid[inst.agent(&format!("clause:{ci}"))] = inst.layout.region(&format!("clause:{ci}"))[1];
    }
    Ok(vec![inst.start.clone(), mid, inst.target.clone()])
}
