use serde::{Deserialize, Serialize};

use crate::hypergraph::Instance;
use crate::regularity::{RegularityWitness, WitnessError};

/// Edges of each block of one class, split by whether their cell is bad.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassBreakdown {
    pub block_sizes: Vec<usize>,
    pub bad_edges: Vec<u64>,
    pub good_edges: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionAudit {
    /// Edges inside bad cells.
    pub i1: u64,
    /// Edges inside good cells.
    pub i2: u64,
    pub edges: u64,
    pub per_class: Vec<ClassBreakdown>,
    pub sigma_count: usize,
    /// `2^k λ^{k+1} δ^{1−Σc_i}`; derived for near-equal blocks.
    pub sigma_cap: f64,
    pub within_cap: bool,
    pub equipartition_slack: Vec<usize>,
    /// All block sizes within one of each other, per class.
    pub near_equal: bool,
}

pub fn audit_decomposition(instance: &Instance, witness: &RegularityWitness) -> Result<DecompositionAudit, WitnessError> {
    witness.check_structure(instance)?;
    let sizes = instance.sizes();
    let assign = witness.assignment(&sizes);
    let mut per_class: Vec<ClassBreakdown> = witness
        .parts()
        .iter()
        .map(|blocks| ClassBreakdown {
            block_sizes: blocks.iter().map(Vec::len).collect(),
            bad_edges: vec![0; blocks.len()],
            good_edges: vec![0; blocks.len()],
        })
        .collect();
    let (mut i1, mut i2) = (0u64, 0u64);
    for edge in instance.edges() {
        let cell: Vec<usize> = edge.iter().zip(&assign).map(|(&x, of)| of[x]).collect();
        let bad = witness.sigma().contains(&cell);
        if bad {
            i1 += 1;
        } else {
            i2 += 1;
        }
        for (class, &j) in cell.iter().enumerate() {
            let slot = if bad { &mut per_class[class].bad_edges } else { &mut per_class[class].good_edges };
            slot[j] += 1;
        }
    }

    let k = witness.k() as i32;
    let lambda = witness.tuple().lambda();
    let csum: f64 = witness.tuple().exponents().iter().sum();
    let sigma_cap = 2f64.powi(k) * lambda.powi(k + 1) * witness.delta().powf(1.0 - csum);
    let sigma_count = witness.sigma().len();
    let equipartition_slack = witness.equipartition_slack();
    Ok(DecompositionAudit {
        i1,
        i2,
        edges: instance.edge_count() as u64,
        per_class,
        sigma_count,
        sigma_cap,
        within_cap: sigma_count as f64 <= sigma_cap,
        near_equal: equipartition_slack.iter().all(|&s| s <= 1),
        equipartition_slack,
    })
}
