//! Multistage minimum s-p cut, solved exactly as one cut in a time-expanded
//! graph.

use crate::error::InstanceError;
use crate::graph::{min_st_cut, Graph};
use crate::schedule::{transition_cost, CostBreakdown, RoundedSchedule, Solution, StepStructure};
use crate::validate;
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutStep {
    /// `(u, v, cost)`.
    pub edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsCutInstance {
    pub vertices: usize,
    pub source: usize,
    pub sink: usize,
    pub steps: Vec<CutStep>,
    /// `transition[t][v]`: cost of moving `v` across the cut between steps
    /// `t` and `t + 1`.
    pub transition: Vec<Vec<f64>>,
}

impl MsCutInstance {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let n = self.vertices;
        validate::horizon(self.steps.len())?;
        validate::vertex(|| "source".into(), self.source, n)?;
        validate::vertex(|| "sink".into(), self.sink, n)?;
        if self.source == self.sink {
            return Err(InstanceError::invalid("sink", "source and sink must differ"));
        }
        for (t, step) in self.steps.iter().enumerate() {
            for (k, &(u, v, c)) in step.edges.iter().enumerate() {
                let field = || format!("steps[{t}].edges[{k}]");
                validate::vertex(field, u, n)?;
                validate::vertex(field, v, n)?;
                if u == v {
                    return Err(InstanceError::invalid(field(), "self-loop"));
                }
                validate::weight(field, c)?;
            }
        }
        validate::len("transition", self.transition.len(), self.horizon() - 1)?;
        for (t, row) in self.transition.iter().enumerate() {
            let field = format!("transition[{t}]");
            validate::len(&field, row.len(), n)?;
            validate::weights(&field, row)?;
        }
        Ok(())
    }

    /// Cost of a schedule given as source-side membership per step.
    pub fn evaluate(&self, sides: &[Vec<bool>]) -> CostBreakdown {
        let step = self
            .steps
            .iter()
            .zip(sides)
            .map(|(s, side)| {
                s.edges
                    .iter()
                    .filter(|e| side[e.0] != side[e.1])
                    .map(|e| e.2)
                    .sum::<f64>()
            })
            .sum();
        CostBreakdown {
            step,
            penalty: 0.0,
            transition: transition_cost(sides, |t, v| self.transition[t][v]),
        }
    }
}

/// Copy `t` of vertex `v` is node `t * n + v`; the super source and super
/// sink come last.
#[derive(Debug, Clone)]
pub struct TimeExpandedGraph {
    pub graph: Graph,
    pub source: usize,
    pub sink: usize,
}

pub fn build_time_expanded_graph(inst: &MsCutInstance) -> Result<TimeExpandedGraph> {
    let (n, big_t) = (inst.vertices, inst.horizon());
    let source = n * big_t;
    let sink = source + 1;
    let mut g = Graph::new(n * big_t + 2);
    for (t, step) in inst.steps.iter().enumerate() {
        for &(u, v, c) in &step.edges {
            g.add_edge(t * n + u, t * n + v, c)?;
        }
        g.add_edge(source, t * n + inst.source, f64::INFINITY)?;
        g.add_edge(t * n + inst.sink, sink, f64::INFINITY)?;
    }
    for (t, row) in inst.transition.iter().enumerate() {
        for (v, &c) in row.iter().enumerate() {
            g.add_edge(t * n + v, (t + 1) * n + v, c)?;
        }
    }
    Ok(TimeExpandedGraph {
        graph: g,
        source,
        sink,
    })
}

pub fn solve_ms_mincut(inst: &MsCutInstance) -> Result<Solution> {
    inst.validate()?;
    let n = inst.vertices;
    let te = build_time_expanded_graph(inst)?;
    let cut = min_st_cut(&te.graph, te.source, te.sink)?;
    let mask = cut.side_mask(te.graph.n());
    let decisions: Vec<Vec<bool>> = (0..inst.horizon())
        .map(|t| mask[t * n..(t + 1) * n].to_vec())
        .collect();
    let structures = decisions
        .iter()
        .map(|d| StepStructure::Cut {
            source_side: (0..n).filter(|&v| d[v]).collect(),
        })
        .collect();
    let cost = inst.evaluate(&decisions);
    Ok(Solution {
        schedule: RoundedSchedule {
            decisions,
            structures,
            cost,
        },
        fractional: None,
        alpha: None,
        beta: None,
        gamma: None,
        f: None,
        bound: Some(1.0),
        flags: Vec::new(),
    })
}
