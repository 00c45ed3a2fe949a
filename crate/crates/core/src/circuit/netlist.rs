use super::CircuitError;
use crate::numkit::C64;

/// Node-to-branch incidence of two-terminal elements with the ground row removed.
///
/// Each branch stores the node where it carries `+1` and the node where it
/// carries `−1`; `None` stands for the eliminated ground node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incidence {
    n_nodes: usize,
    branches: Vec<(Option<usize>, Option<usize>)>,
}

impl Incidence {
    pub fn empty(n_nodes: usize) -> Self {
        Self {
            n_nodes,
            branches: Vec::new(),
        }
    }

    pub fn from_branches(n_nodes: usize, branches: Vec<(Option<usize>, Option<usize>)>) -> Self {
        Self { n_nodes, branches }
    }

    /// Builds the incidence from a dense `nodes × branches` array with entries in `{−1, 0, 1}`.
    pub fn from_dense(name: &'static str, rows: &[Vec<i8>]) -> Result<Self, CircuitError> {
        let n_nodes = rows.len();
        let n_br = rows.first().map_or(0, Vec::len);
        let mut branches = Vec::with_capacity(n_br);
        for b in 0..n_br {
            let (mut plus, mut minus) = (None, None);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n_br {
                    return Err(CircuitError::NotTwoTerminal { name, branch: b });
                }
                match row[b] {
                    0 => {}
                    1 if plus.is_none() => plus = Some(i),
                    -1 if minus.is_none() => minus = Some(i),
                    _ => return Err(CircuitError::NotTwoTerminal { name, branch: b }),
                }
            }
            if plus.is_none() && minus.is_none() {
                return Err(CircuitError::NotTwoTerminal { name, branch: b });
            }
            branches.push((plus, minus));
        }
        Ok(Self { n_nodes, branches })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_branches(&self) -> usize {
        self.branches.len()
    }

    pub fn terminals(&self, branch: usize) -> (Option<usize>, Option<usize>) {
        self.branches[branch]
    }

    /// Nonzero entries `(node, ±1)` of one column.
    pub fn column(&self, branch: usize) -> Vec<(usize, i8)> {
        let (p, m) = self.branches[branch];
        p.map(|i| (i, 1)).into_iter().chain(m.map(|i| (i, -1))).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<i8>> {
        let mut out = vec![vec![0i8; self.n_branches()]; self.n_nodes];
        for b in 0..self.n_branches() {
            for (i, s) in self.column(b) {
                out[i][b] = s;
            }
        }
        out
    }
}

/// Incidence matrices and element values of an RC circuit with sources.
#[derive(Debug, Clone)]
pub struct CircuitNetlist {
    pub a_r: Incidence,
    pub a_c: Incidence,
    pub a_i: Incidence,
    pub a_v: Incidence,
    /// Branch conductances in S.
    pub g: Vec<f64>,
    /// Branch capacitances in F.
    pub c: Vec<f64>,
    /// Current source amplitudes in A.
    pub i_src: Vec<C64>,
    /// Voltage source amplitudes in V.
    pub v_src: Vec<C64>,
    /// Original node names, indexed like the incidence rows.
    pub node_names: Vec<String>,
}

impl CircuitNetlist {
    pub fn n_nodes(&self) -> usize {
        self.a_r.n_nodes()
    }

    pub(crate) fn check(&self) -> Result<(), CircuitError> {
        let n = self.n_nodes();
        for (name, inc) in [("A_C", &self.a_c), ("A_I", &self.a_i), ("A_V", &self.a_v)] {
            if inc.n_nodes() != n {
                return Err(CircuitError::DimensionMismatch {
                    name,
                    expected: n,
                    found: inc.n_nodes(),
                });
            }
        }
        let counts = [
            ("G", self.a_r.n_branches(), self.g.len()),
            ("C", self.a_c.n_branches(), self.c.len()),
            ("i_src", self.a_i.n_branches(), self.i_src.len()),
            ("v_src", self.a_v.n_branches(), self.v_src.len()),
        ];
        for (name, branches, values) in counts {
            if branches != values {
                return Err(CircuitError::ValueCount {
                    name,
                    branches,
                    values,
                });
            }
        }
        for (name, vals) in [("G", &self.g), ("C", &self.c)] {
            for (b, &v) in vals.iter().enumerate() {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CircuitError::NonPositive {
                        name,
                        branch: b,
                        value: v,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Two series capacitors fed by a current source, with a resistor from the
/// source node to ground.
///
/// Node 1 carries the source and the resistor, node 2 sits between the
/// capacitors; `C₁ = C₂ = c`, `I = 1 A`.
pub fn rc_benchmark(r: f64, c: f64) -> Result<CircuitNetlist, CircuitError> {
    let a_c = Incidence::from_dense("A_C", &[vec![1, 0], vec![-1, 1]])?;
    let a_r = Incidence::from_dense("A_R", &[vec![1], vec![0]])?;
    let a_i = Incidence::from_dense("A_I", &[vec![1], vec![0]])?;
    let net = CircuitNetlist {
        a_r,
        a_c,
        a_i,
        a_v: Incidence::empty(2),
        g: vec![1.0 / r],
        c: vec![c, c],
        i_src: vec![C64::new(1.0, 0.0)],
        v_src: Vec::new(),
        node_names: vec!["1".into(), "2".into()],
    };
    net.check()?;
    Ok(net)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetlistWarning {
    /// No resistive or voltage-source path to ground: the potential is not
    /// determined in the static limit.
    UncontrolledPotential { node: String },
    /// Current sources inject a nonzero net current into a group of nodes
    /// that is only reachable through capacitors.
    CurrentIntoCapacitiveCut { nodes: Vec<String> },
}

impl std::fmt::Display for NetlistWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::UncontrolledPotential { node } => {
                write!(f, "node {node} has no resistive path to ground; its potential is undefined at 0 Hz")
            }
            Self::CurrentIntoCapacitiveCut { nodes } => write!(
                f,
                "current sources drive capacitive branches at 0 Hz (nodes {})",
                nodes.join(", ")
            ),
        }
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Static-limit diagnostics. Warnings are only produced for `ω = 0`.
pub fn validate_netlist(net: &CircuitNetlist, omega: f64) -> Vec<NetlistWarning> {
    if omega != 0.0 {
        return Vec::new();
    }
    let n = net.n_nodes();
    let ground = n;
    let mut parent: Vec<usize> = (0..=n).collect();
    for inc in [&net.a_r, &net.a_v] {
        for b in 0..inc.n_branches() {
            let (p, m) = inc.terminals(b);
            let a = find(&mut parent, p.unwrap_or(ground));
            let z = find(&mut parent, m.unwrap_or(ground));
            parent[a] = z;
        }
    }
    let root_ground = find(&mut parent, ground);
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();

    let mut out = Vec::new();
    for (i, &r) in roots.iter().enumerate() {
        if r != root_ground {
            out.push(NetlistWarning::UncontrolledPotential {
                node: net.node_names[i].clone(),
            });
        }
    }

    let mut injected = vec![C64::new(0.0, 0.0); n + 1];
    for (b, &cur) in net.i_src.iter().enumerate() {
        for (i, s) in net.a_i.column(b) {
            injected[roots[i]] += f64::from(s) * cur;
        }
    }
    let mut seen = vec![false; n + 1];
    for &r in &roots {
        if r == root_ground || seen[r] {
            continue;
        }
        seen[r] = true;
        if injected[r].norm() > 0.0 {
            let nodes = (0..n)
                .filter(|&i| roots[i] == r)
                .map(|i| net.node_names[i].clone())
                .collect();
            out.push(NetlistWarning::CurrentIntoCapacitiveCut { nodes });
        }
    }
    out
}
