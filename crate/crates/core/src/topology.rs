//! Seeded random topologies, session sampling and the two hand-built
//! fixtures.
//!
//! Every undirected link is emitted as two opposite arcs, adjacent in the
//! edge table. All randomness comes from [`rng_for`].

use std::collections::BTreeSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ExperimentError;
use crate::graph::{DirectedMultigraph, NodeId};

/// Identifier of the generator family, echoed into experiment outputs.
pub const RNG_NAME: &str = "rand_chacha::ChaCha8Rng/seed_from_u64";

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a sequence of indices (splitmix64 finalizer per
/// step) so that every trial gets its own independent stream.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Model {
    /// Each unordered pair is linked with probability `p`.
    ErdosRenyi { n: usize, p: f64 },
    /// Ring lattice of even degree `k`, each lattice link rewired with
    /// probability `beta`.
    WattsStrogatz { n: usize, k: usize, beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopologySpec {
    #[serde(flatten)]
    pub model: Model,
    pub seed: u64,
}

impl TopologySpec {
    pub fn er(n: usize, p: f64, seed: u64) -> Self {
        Self {
            model: Model::ErdosRenyi { n, p },
            seed,
        }
    }

    pub fn ws(n: usize, k: usize, beta: f64, seed: u64) -> Self {
        Self {
            model: Model::WattsStrogatz { n, k, beta },
            seed,
        }
    }

    pub fn n(&self) -> usize {
        match self.model {
            Model::ErdosRenyi { n, .. } | Model::WattsStrogatz { n, .. } => n,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::InvalidTopology(msg));
        match self.model {
            Model::ErdosRenyi { n, p } => {
                if n < 2 {
                    return bad(format!("ER needs n >= 2, got {n}"));
                }
                if !(p > 0.0 && p <= 1.0) {
                    return bad(format!("ER edge probability must be in (0, 1], got {p}"));
                }
            }
            Model::WattsStrogatz { n, k, beta } => {
                if k == 0 || k % 2 != 0 {
                    return bad(format!("WS mean degree must be even and positive, got {k}"));
                }
                if k >= n {
                    return bad(format!("WS mean degree {k} must be below n = {n}"));
                }
                if !(0.0..=1.0).contains(&beta) {
                    return bad(format!("WS rewiring probability must be in [0, 1], got {beta}"));
                }
            }
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<DirectedMultigraph, ExperimentError> {
        match self.model {
            Model::ErdosRenyi { .. } => gen_er(self),
            Model::WattsStrogatz { .. } => gen_ws(self),
        }
    }
}

/// Even mean degree closest to `density * (n - 1)`, clamped to `[2, n)`.
pub fn ws_degree_for_density(n: usize, density: f64) -> usize {
    let target = density * (n.saturating_sub(1)) as f64;
    let k = 2 * ((target / 2.0).round() as usize);
    let max_even = if n % 2 == 0 { n.saturating_sub(2) } else { n - 1 };
    k.clamp(2, max_even.max(2))
}

fn undirected_to_arcs(node_count: usize, links: &[(usize, usize)]) -> DirectedMultigraph {
    let arcs: Vec<(usize, usize)> = links.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    DirectedMultigraph::new(node_count, &arcs).expect("generated links are in range and loop-free")
}

pub fn gen_er(spec: &TopologySpec) -> Result<DirectedMultigraph, ExperimentError> {
    spec.validate()?;
    let Model::ErdosRenyi { n, p } = spec.model else {
        return Err(ExperimentError::InvalidTopology("gen_er needs an ER spec".into()));
    };
    let mut rng = rng_for(spec.seed);
    let mut links = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen::<f64>() < p {
                links.push((a, b));
            }
        }
    }
    Ok(undirected_to_arcs(n, &links))
}

pub fn gen_ws(spec: &TopologySpec) -> Result<DirectedMultigraph, ExperimentError> {
    spec.validate()?;
    let Model::WattsStrogatz { n, k, beta } = spec.model else {
        return Err(ExperimentError::InvalidTopology("gen_ws needs a WS spec".into()));
    };
    let mut rng = rng_for(spec.seed);

    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut links = Vec::with_capacity(n * k / 2);
    let mut present = BTreeSet::new();
    let mut degree = vec![0usize; n];
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            links.push((u, v));
            present.insert(key(u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
    }

    // One pass over the lattice, layer by layer, rewiring the far endpoint.
    for j in 1..=k / 2 {
        for u in 0..n {
            let slot = (j - 1) * n + u;
            if rng.gen::<f64>() >= beta {
                continue;
            }
            if degree[u] >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && !present.contains(&key(u, w)) {
                    break w;
                }
            };
            let (_, v) = links[slot];
            present.remove(&key(u, v));
            degree[v] -= 1;
            present.insert(key(u, w));
            degree[w] += 1;
            links[slot] = (u, w);
        }
    }
    Ok(undirected_to_arcs(n, &links))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionSpec {
    pub receiver_density: f64,
    pub seed: u64,
}

impl SessionSpec {
    /// `max(1, round_half_up(density * n))`.
    pub fn receiver_count(&self, n: usize) -> usize {
        let raw = self.receiver_density * n as f64;
        // Nudge so products like 0.25 * 10 that land a hair under .5 still round up.
        ((raw + 0.5 + 1e-9).floor() as usize).max(1)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if !(self.receiver_density > 0.0 && self.receiver_density < 1.0) {
            return Err(ExperimentError::InvalidSession(format!(
                "receiver density must be in (0, 1), got {}",
                self.receiver_density
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub source: NodeId,
    pub receivers: Vec<NodeId>,
}

/// Draws the source and the receivers uniformly without replacement.
/// Receivers come back in ascending order.
pub fn sample_session(g: &DirectedMultigraph, spec: &SessionSpec) -> Result<Session, ExperimentError> {
    spec.validate()?;
    let n = g.node_count();
    let count = spec.receiver_count(n);
    if count >= n {
        return Err(ExperimentError::InvalidSession(format!(
            "{count} receivers plus a source do not fit in {n} nodes"
        )));
    }
    let mut rng = rng_for(spec.seed);
    let picked = index::sample(&mut rng, n, count + 1).into_vec();
    let source = NodeId(picked[0]);
    let mut receivers: Vec<NodeId> = picked[1..].iter().copied().map(NodeId).collect();
    receivers.sort_unstable();
    Ok(Session { source, receivers })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub graph: DirectedMultigraph,
    pub source: NodeId,
    pub receivers: Vec<NodeId>,
}

pub const FIXTURE_NAMES: &[&str] = &["fig1", "fig4", "fig5"];

pub fn fixture(name: &str) -> Option<Fixture> {
    match name {
        "fig1" => Some(fixture_fig1()),
        "fig4" => Some(fixture_fig4()),
        "fig5" => Some(fixture_fig5()),
        _ => None,
    }
}

/// Five-node BFS illustration: s, U, V, W, r with every link in both
/// directions. Node ids: s=0 U=1 V=2 W=3 r=4.
pub fn fixture_fig1() -> Fixture {
    let links = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)];
    Fixture {
        graph: undirected_to_arcs(5, &links),
        source: NodeId(0),
        receivers: vec![NodeId(4)],
    }
}

/// Three-receiver walkthrough topology.
///
/// Node ids: s=0 X=1 U=2 V=3 W=4 r1=5 r2=6 r3=7. Arcs in drawing order:
///
/// | id | arc    | note                         |
/// |----|--------|------------------------------|
/// | 0  | s->U   |                              |
/// | 1  | s->V   |                              |
/// | 2  | s->U   | parallel instance            |
/// | 3  | s->X   |                              |
/// | 4  | U->W   |                              |
/// | 5  | V->W   |                              |
/// | 6  | W->r1  |                              |
/// | 7  | W->r2  |                              |
/// | 8  | W->r3  |                              |
/// | 9  | U->r2  |                              |
/// | 10 | X->r3  |                              |
/// | 11 | V->r1  | drawn only as r1's green path |
///
/// Without arc 11, `W->r1` is the only arc into r1 and r1 could not reach
/// the two paths the walkthrough gives it.
pub fn fixture_fig4() -> Fixture {
    let (s, x, u, v, w, r1, r2, r3) = (0, 1, 2, 3, 4, 5, 6, 7);
    let arcs = [
        (s, u),
        (s, v),
        (s, u),
        (s, x),
        (u, w),
        (v, w),
        (w, r1),
        (w, r2),
        (w, r3),
        (u, r2),
        (x, r3),
        (v, r1),
    ];
    Fixture {
        graph: DirectedMultigraph::new(8, &arcs).expect("fixture is well formed"),
        source: NodeId(s),
        receivers: vec![NodeId(r1), NodeId(r2), NodeId(r3)],
    }
}

/// Adversarial topology where overlap-constrained integration loses a unit.
///
/// Node ids: s=0 a=1 c=2 b=3 d=4 r1=5 r2=6 r3=7. Arcs, in order:
/// s->a, s->c, a->b, c->b, b->d, a->r1, a->r2, c->r2, c->r3, d->r1, d->r3.
pub fn fixture_fig5() -> Fixture {
    let (s, a, c, b, d, r1, r2, r3) = (0, 1, 2, 3, 4, 5, 6, 7);
    let arcs = [
        (s, a),
        (s, c),
        (a, b),
        (c, b),
        (b, d),
        (a, r1),
        (a, r2),
        (c, r2),
        (c, r3),
        (d, r1),
        (d, r3),
    ];
    Fixture {
        graph: DirectedMultigraph::new(8, &arcs).expect("fixture is well formed"),
        source: NodeId(s),
        receivers: vec![NodeId(r1), NodeId(r2), NodeId(r3)],
    }
}
