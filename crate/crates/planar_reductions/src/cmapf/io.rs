//! Map files: an ASCII grid plus a JSON sidecar, and SVG rendering.
//!
//! In the grid, `#` is an absent cell, `.` an empty cell, and a letter marks
//! the start cell of an agent by role (`p` provider, `r` requester, `m`
//! mobile). The top-left character is the sidecar's `origin`; `x` grows to
//! the right and `y` upwards. The sidecar lists the agents and the radius,
//! and optionally the movement edges; without them every pair of adjacent
//! cells is a movement edge.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::layout::{AgentSpec, Role};
use super::{AgentConfiguration, Cell, CmapfError, GridEnvironment, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapInstance {
    pub env: GridEnvironment,
    pub agents: Vec<AgentSpec>,
}

impl MapInstance {
    pub fn start(&self) -> AgentConfiguration {
        self.agents.iter().map(|a| a.start).collect()
    }

    pub fn target(&self) -> AgentConfiguration {
        self.agents.iter().map(|a| a.target).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    radius: u32,
    origin: Cell,
    agents: Vec<SidecarAgent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    moves: Option<Vec<(Cell, Cell)>>,
}

#[derive(Serialize, Deserialize)]
struct SidecarAgent {
    id: String,
    start: Cell,
    target: Cell,
    role: Role,
}

fn bounds(cells: &BTreeSet<Cell>) -> (i32, i32, i32, i32) {
    let xs = || cells.iter().map(|c| c.0);
    let ys = || cells.iter().map(|c| c.1);
    (xs().min().unwrap_or(0), xs().max().unwrap_or(-1), ys().min().unwrap_or(0), ys().max().unwrap_or(-1))
}

fn role_char(r: Role) -> char {
    match r {
        Role::Provider => 'p',
        Role::Requester => 'r',
        Role::Mobile => 'm',
    }
}

/// ASCII grid and JSON sidecar. Movement edges are written out unless the
/// environment is open (every adjacent pair connected).
pub fn instance_to_map(inst: &MapInstance) -> (String, String) {
    let env = &inst.env;
    let (x0, x1, y0, y1) = bounds(env.cells());
    let mut grid = String::new();
    for y in (y0..=y1).rev() {
        for x in x0..=x1 {
            let ch = match inst.agents.iter().find(|a| a.start == (x, y)) {
                Some(a) => role_char(a.role),
                None if env.cells().contains(&(x, y)) => '.',
                None => '#',
            };
            grid.push(ch);
        }
        grid.push('\n');
    }
    (grid, instance_to_json(inst, (x0, y1)))
}

pub fn instance_to_json(inst: &MapInstance, origin: Cell) -> String {
    let env = &inst.env;
    let open = GridEnvironment::open(env.cells().clone(), env.radius());
    let sidecar = Sidecar {
        radius: env.radius(),
        origin,
        agents: inst
            .agents
            .iter()
            .map(|a| SidecarAgent { id: a.name.clone(), start: a.start, target: a.target, role: a.role })
            .collect(),
        moves: (open != *env).then(|| env.movement_edges().collect()),
    };
    serde_json::to_string_pretty(&sidecar).expect("plain data serialises")
}

pub fn instance_from_map(grid: &str, sidecar: &str) -> Result<MapInstance> {
    let side: Sidecar = serde_json::from_str(sidecar).map_err(|e| CmapfError::Parse(format!("sidecar: {e}")))?;
    let mut cells = BTreeSet::new();
    let mut marked = BTreeSet::new();
    for (row, line) in grid.lines().enumerate() {
        for (col, ch) in line.chars().enumerate() {
            let c = (side.origin.0 + col as i32, side.origin.1 - row as i32);
            match ch {
                '#' => {}
                '.' => {
                    cells.insert(c);
                }
                'p' | 'r' | 'm' => {
                    cells.insert(c);
                    marked.insert((c, ch));
                }
                _ => return Err(CmapfError::Parse(format!("line {}, column {}: unexpected {ch:?}", row + 1, col + 1))),
            }
        }
    }
    let starts: BTreeSet<(Cell, char)> = side.agents.iter().map(|a| (a.start, role_char(a.role))).collect();
    if starts != marked {
        return Err(CmapfError::Parse("grid letters do not match the sidecar agents".into()));
    }
    let env = match side.moves {
        Some(moves) => GridEnvironment::new(cells, moves, side.radius)?,
        None => GridEnvironment::open(cells, side.radius),
    };
    let agents = side
        .agents
        .into_iter()
        .map(|a| AgentSpec { name: a.id, role: a.role, start: a.start, target: a.target })
        .collect();
    Ok(MapInstance { env, agents })
}

/// SVG drawing of the environment with agents at the cells of `at`:
/// providers grey, requesters red, mobile agents blue, movement edges as
/// thin lines and mobile targets as rings.
pub fn instance_to_svg(inst: &MapInstance, at: &[Cell]) -> String {
    const S: i32 = 12;
    let env = &inst.env;
    let (x0, x1, y0, y1) = bounds(env.cells());
    let (w, h) = ((x1 - x0 + 1) * S, (y1 - y0 + 1) * S);
    let px = |c: Cell| ((c.0 - x0) * S, (y1 - c.1) * S);
    let mut out =
        format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n");
    out.push_str(&format!("<rect width=\"{w}\" height=\"{h}\" fill=\"#222\"/>\n"));
    for &c in env.cells() {
        let (x, y) = px(c);
        let _ = writeln!(out, "<rect x=\"{x}\" y=\"{y}\" width=\"{S}\" height=\"{S}\" fill=\"#fff\" stroke=\"#ddd\"/>");
    }
    for (a, b) in env.movement_edges() {
        let ((ax, ay), (bx, by)) = (px(a), px(b));
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#4a4\" stroke-width=\"2\"/>",
            ax + S / 2,
            ay + S / 2,
            bx + S / 2,
            by + S / 2
        );
    }
    for (agent, &c) in inst.agents.iter().zip(at) {
        let (x, y) = px(c);
        let fill = match agent.role {
            Role::Provider => "#999",
            Role::Requester => "#d33",
            Role::Mobile => "#36c",
        };
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"><title>{}</title></circle>",
            x + S / 2,
            y + S / 2,
            S / 3,
            agent.name
        );
        if agent.role == Role::Mobile {
            let (tx, ty) = px(agent.target);
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#36c\"/>",
                tx + S / 2,
                ty + S / 2,
                S / 2 - 1
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
