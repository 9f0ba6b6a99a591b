//! Constraint graph to linear literal-planar 3-SAT reconfiguration.
//!
//! Edge `e` becomes variable `x_e`, true when `e` points along its
//! referential orientation. For a vertex `v`, the literal `e^v` says "`e`
//! points to `v`". An OR vertex gives the clause `e^v ∨ f^v ∨ g^v`; an AND
//! vertex with weight-2 edge `e` gives `(g^v ∨ e^v) ∧ (e^v ∨ f^v)`. The
//! literal cycle comes from cycle augmentation with the paired literal
//! edges as the dually connected matching.

use std::collections::{BTreeMap, BTreeSet};

use super::{is_legal, ConstraintGraph, NclConfiguration, NclError, NodeKind, Result};
use crate::cycle_augment::{build_kite_from_matching, compute_vprime_cycle, AugmentInstance};
use crate::embedding::{EdgeId, VertexId};
use crate::sat_core::{
    augment, build_incidence, is_linear, Assignment, Clause, Cnf, CycleOrder, GraphKind, Literal, Node, Var,
};
use crate::sat_reduce::LlpInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NclReduction {
    pub llp: LlpInstance,
    pub start: Assignment,
    pub target: Assignment,
    /// Edge of the constraint graph behind each variable.
    pub edge_of_var: Vec<EdgeId>,
    /// Degree-3 vertex of the literal-clause graph standing for each
    /// constraint-graph vertex: the clause of an OR vertex, the literal of
    /// the weight-2 edge at an AND vertex.
    pub gadget_vertex: BTreeMap<VertexId, VertexId>,
}

/// Literal saying that `e` points to `w`.
fn points_to(g: &ConstraintGraph, var: Var, e: EdgeId, w: VertexId) -> Literal {
    Literal { var, positive: g.referential(e).1 == w }
}

/// `ν_c`: variable `k` (the `k`-th edge by id) is true iff that edge has its
/// referential orientation in `c`.
pub fn assignment_of(g: &ConstraintGraph, c: &NclConfiguration) -> Result<Assignment> {
    g.check_configuration(c)?;
    Ok(g.edges().map(|e| c[&e] == g.referential(e).1).collect())
}

pub fn configuration_of(g: &ConstraintGraph, nu: &[bool]) -> Result<NclConfiguration> {
    let ids: Vec<EdgeId> = g.edges().collect();
    if nu.len() != ids.len() {
        return Err(NclError::BadConfiguration(format!("{} values for {} edges", nu.len(), ids.len())));
    }
    Ok(ids
        .iter()
        .zip(nu)
        .map(|(&e, &x)| {
            let (u, v) = g.referential(e);
            (e, if x { v } else { u })
        })
        .collect())
}

pub fn ncl_to_llp_reconfig(g: &ConstraintGraph, s: &NclConfiguration, t: &NclConfiguration) -> Result<NclReduction> {
    for (c, which) in [(s, "start"), (t, "target")] {
        g.check_configuration(c)?;
        if !is_legal(g, c) {
            return Err(NclError::IllegalEndpoint(which));
        }
    }
    let edge_of_var: Vec<EdgeId> = g.edges().collect();
    let var_of: BTreeMap<EdgeId, Var> = edge_of_var.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let lit = |e: EdgeId, w: VertexId| points_to(g, var_of[&e], e, w);

    let adj = g.graph().adjacency();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut gadget: BTreeMap<VertexId, Node> = BTreeMap::new();
    for (&v, incident) in &adj {
        let edges: Vec<EdgeId> = incident.iter().map(|&(e, _)| e).collect();
        match g.kind(v) {
            NodeKind::Or => {
                gadget.insert(v, Node::Clause(clauses.len()));
                clauses.push(edges.iter().map(|&e| lit(e, v)).collect());
            }
            NodeKind::And => {
                let heavy = *edges.iter().find(|&&e| g.weight(e) == 2).expect("validated AND vertex");
                let light: Vec<EdgeId> = edges.iter().copied().filter(|&e| e != heavy).collect();
                let (f, gl) = (light[0], light[1]);
                gadget.insert(v, Node::Literal(lit(heavy, v)));
                clauses.push(Clause::from([lit(gl, v), lit(heavy, v)]));
                clauses.push(Clause::from([lit(heavy, v), lit(f, v)]));
            }
        }
    }
    let names = edge_of_var.iter().map(|e| format!("e{e}")).collect();
    let cnf = Cnf::new(names, clauses).map_err(|e| NclError::MalformedConstraintGraph(e.to_string()))?;
    if !is_linear(&cnf) {
        return Err(NclError::MalformedConstraintGraph("encoding is not linear".into()));
    }

    // Literal-clause graph with its paired edges, and the literal cycle.
    let inc = build_incidence(&cnf, GraphKind::LiteralClause);
    let mut lg = inc.graph.clone();
    let mut paired: BTreeMap<EdgeId, Var> = BTreeMap::new();
    for x in 0..cnf.num_vars() {
        let p = inc.vertex_of[&Node::Literal(Literal::pos(x))];
        let q = inc.vertex_of[&Node::Literal(Literal::neg(x))];
        paired.insert(lg.push_edge(p, q), x);
    }
    let literal_vertices: BTreeSet<VertexId> =
        inc.nodes.iter().filter(|(_, n)| matches!(n, Node::Literal(_))).map(|(&v, _)| v).collect();
    let aug_err = |e: crate::cycle_augment::CycleAugmentError| NclError::CycleAugment(e.to_string());
    let inst = AugmentInstance::new(&lg, literal_vertices).map_err(aug_err)?;
    let eprime: BTreeSet<EdgeId> = paired.keys().copied().collect();
    let kite = build_kite_from_matching(&inst, &eprime).map_err(aug_err)?;
    let (cycle, partition) = compute_vprime_cycle(&inst, &kite).map_err(aug_err)?;
    if partition.red != eprime {
        return Err(NclError::CycleAugment("paired edges are not one colour class".into()));
    }
    let order: Vec<Literal> = cycle
        .order
        .iter()
        .map(|v| match inc.nodes[v] {
            Node::Literal(l) => l,
            _ => unreachable!("cycle visits literal vertices only"),
        })
        .collect();

    // Move the embedding onto the augmented graph's edge ids.
    let aug = augment(&inc, &CycleOrder::Literals(order.clone())).map_err(|e| NclError::CycleAugment(e.to_string()))?;
    let mut edge_map: BTreeMap<EdgeId, EdgeId> = inc.graph.edges.keys().map(|&e| (e, e)).collect();
    for (&e, &x) in &paired {
        edge_map.insert(e, aug.paired_edges[&x]);
    }
    for (k, &e) in cycle.edges.iter().enumerate() {
        edge_map.insert(e, aug.cycle_edges[k]);
    }
    let embedding =
        cycle.embedding.transport(&aug.graph, &edge_map).map_err(|e| NclError::CycleAugment(e.to_string()))?;
    let llp = LlpInstance::with_embedding(cnf, order, embedding).map_err(|e| NclError::CycleAugment(e.to_string()))?;

    let gadget_vertex = gadget.into_iter().map(|(v, node)| (v, inc.vertex_of[&node])).collect();
    Ok(NclReduction { llp, start: assignment_of(g, s)?, target: assignment_of(g, t)?, edge_of_var, gadget_vertex })
}
