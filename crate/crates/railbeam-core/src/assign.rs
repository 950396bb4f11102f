//! Max-min reflector-to-train assignment and phase-shift construction.
//!
//! The per-slot subproblem assigns every reflector to exactly one train so
//! that the smallest per-train surrogate rate sum_n i_{n,m} * R_{n,m} is as
//! large as possible. `solve_exact` proves optimality by branch-and-bound,
//! `solve_brute_force` is the enumeration oracle, `solve_greedy` is the
//! scalable fallback used when the node budget runs out.

use num_complex::Complex64;

use crate::channel::{CascadedLink, RateMatrix};
use crate::error::{Error, Result};

/// Reflector-to-train assignment with every row summing to exactly one.
///
/// Stored as the assigned train index per reflector, which makes the
/// row-sum-1 constraint structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorMatrix {
    assigned: Vec<usize>,
    num_trains: usize,
}

impl IndicatorMatrix {
    pub fn new(assigned: Vec<usize>, num_trains: usize) -> Result<Self> {
        if num_trains == 0 || assigned.is_empty() {
            return Err(Error::DimensionMismatch("indicator must be at least 1x1".into()));
        }
        if let Some(bad) = assigned.iter().find(|&&t| t >= num_trains) {
            return Err(Error::DimensionMismatch(format!(
                "train index {bad} out of range for {num_trains} trains"
            )));
        }
        Ok(IndicatorMatrix { assigned, num_trains })
    }

    pub fn num_reflectors(&self) -> usize {
        self.assigned.len()
    }

    pub fn num_trains(&self) -> usize {
        self.num_trains
    }

    /// Train assigned to reflector `n`.
    pub fn train_of(&self, n: usize) -> usize {
        self.assigned[n]
    }

    /// i_{n,m} as a boolean.
    pub fn entry(&self, n: usize, m: usize) -> bool {
        self.assigned[n] == m
    }

    /// Column m as a reflector mask.
    pub fn column_mask(&self, m: usize) -> Vec<bool> {
        self.assigned.iter().map(|&t| t == m).collect()
    }

    /// Dense N x M 0/1 view.
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.assigned
            .iter()
            .map(|&t| (0..self.num_trains).map(|m| u8::from(m == t)).collect())
            .collect()
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assigned
    }

    /// Number of reflectors serving train `m`.
    pub fn count_for(&self, m: usize) -> usize {
        self.assigned.iter().filter(|&&t| t == m).count()
    }

    /// Trains with no reflector at all (possible when M > N).
    pub fn unserved_trains(&self) -> Vec<usize> {
        (0..self.num_trains).filter(|&m| self.count_for(m) == 0).collect()
    }

    /// Compare flattened row-major 0/1 matrices lexicographically.
    fn flattened_lex_less(&self, other: &IndicatorMatrix) -> bool {
        for (&a, &b) in self.assigned.iter().zip(&other.assigned) {
            if a != b {
                // Within a row the 1 sits at the assigned column; the row
                // whose 1 comes later is the lexicographically smaller one.
                return a > b;
            }
        }
        false
    }
}

/// Ideal per-reflector phase shifts, radians in [0, 2*pi).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    pub theta: Vec<f64>,
}

impl PhaseVector {
    pub fn new(theta: Vec<f64>) -> Self {
        PhaseVector {
            theta: theta.into_iter().map(|t| t.rem_euclid(2.0 * std::f64::consts::PI)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

/// Per-train masked diagonal phase-shift matrix.
///
/// For train m the diagonal entry of reflector n is alpha * e^{j theta_n}
/// when the reflector serves m and zero otherwise.
#[derive(Debug, Clone)]
pub struct PhaseShiftMatrix {
    diagonals: Vec<Vec<Complex64>>, // [m][n]
}

impl PhaseShiftMatrix {
    pub fn diagonal_for_train(&self, m: usize) -> &[Complex64] {
        &self.diagonals[m]
    }

    pub fn num_trains(&self) -> usize {
        self.diagonals.len()
    }

    pub fn num_reflectors(&self) -> usize {
        self.diagonals.first().map_or(0, |d| d.len())
    }
}

/// Solution of the per-slot assignment problem.
#[derive(Debug, Clone)]
pub struct AssignmentSolution {
    pub indicator: IndicatorMatrix,
    /// Surrogate per-train rate: sum of assigned single-reflector rates.
    pub per_train_rate: Vec<f64>,
    /// Bottleneck value Z = min over trains of the surrogate rate.
    pub bottleneck: f64,
    /// True when optimality was proven within the node budget.
    pub optimal: bool,
    /// Branch-and-bound nodes expanded (zero for the other solvers).
    pub nodes_explored: u64,
}

/// Canonical evaluation of an assignment: per-train sums accumulated in
/// ascending reflector order. Every solver reports values through this one
/// function so equal assignments produce bit-equal numbers.
pub fn evaluate_assignment(rates: &RateMatrix, assigned: &[usize]) -> (Vec<f64>, f64) {
    let m = rates.num_trains();
    let mut sums = vec![0.0; m];
    for (n, &t) in assigned.iter().enumerate() {
        sums[t] += rates.get(n, t);
    }
    let bottleneck = sums.iter().cloned().fold(f64::INFINITY, f64::min);
    (sums, bottleneck)
}

fn solution_from(rates: &RateMatrix, assigned: Vec<usize>, optimal: bool, nodes: u64) -> AssignmentSolution {
    let (per_train_rate, bottleneck) = evaluate_assignment(rates, &assigned);
    AssignmentSolution {
        indicator: IndicatorMatrix { assigned, num_trains: rates.num_trains() },
        per_train_rate,
        bottleneck,
        optimal,
        nodes_explored: nodes,
    }
}

/// Reflector visit order: descending best-rate-in-row, ties by lower index.
fn search_order(rates: &RateMatrix) -> Vec<usize> {
    let n = rates.num_reflectors();
    let mut order: Vec<usize> = (0..n).collect();
    let row_max: Vec<f64> = (0..n)
        .map(|i| rates.row(i).iter().cloned().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    order.sort_by(|&a, &b| {
        row_max[b].partial_cmp(&row_max[a]).unwrap().then(a.cmp(&b))
    });
    order
}

/// Greedy fallback: walk reflectors in descending best-rate order and give
/// each to the train with the smallest surrogate sum so far (ties to the
/// lowest train index).
pub fn solve_greedy(rates: &RateMatrix) -> AssignmentSolution {
    let m = rates.num_trains();
    let mut sums = vec![0.0; m];
    let mut assigned = vec![0usize; rates.num_reflectors()];
    for &n in &search_order(rates) {
        let mut best = 0usize;
        for t in 1..m {
            if sums[t] < sums[best] {
                best = t;
            }
        }
        assigned[n] = best;
        sums[best] += rates.get(n, best);
    }
    solution_from(rates, assigned, false, 0)
}

/// Exhaustive oracle over all M^N assignments.
///
/// Ties are broken by the lexicographically smallest flattened indicator.
pub fn solve_brute_force(rates: &RateMatrix) -> Result<AssignmentSolution> {
    let n = rates.num_reflectors();
    let m = rates.num_trains();
    let total = (m as f64).powi(n as i32);
    if total > 1e7 {
        return Err(Error::InstanceTooLarge(format!(
            "{m}^{n} assignments exceed the brute-force bound"
        )));
    }

    let mut assigned = vec![0usize; n];
    let mut best: Option<AssignmentSolution> = None;
    loop {
        let candidate = solution_from(rates, assigned.clone(), true, 0);
        best = match best {
            None => Some(candidate),
            Some(cur) => {
                if candidate.bottleneck > cur.bottleneck
                    || (candidate.bottleneck == cur.bottleneck
                        && candidate.indicator.flattened_lex_less(&cur.indicator))
                {
                    Some(candidate)
                } else {
                    Some(cur)
                }
            }
        };
        // odometer increment
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(best.unwrap());
            }
            pos -= 1;
            assigned[pos] += 1;
            if assigned[pos] < m {
                break;
            }
            assigned[pos] = 0;
        }
    }
}

/// Exact max-min assignment by depth-first branch-and-bound.
///
/// Reflectors are branched in descending best-rate order; the bound at a
/// node is min over trains of (current sum + everything still unassigned
/// for that train), which dominates any completion. The greedy solution
/// seeds the incumbent. When `node_limit` is exhausted the best incumbent
/// is returned with `optimal = false`.
pub fn solve_exact(rates: &RateMatrix, node_limit: u64) -> AssignmentSolution {
    let n = rates.num_reflectors();
    let m = rates.num_trains();
    let order = search_order(rates);

    // suffix[d][t]: total rate for train t over reflectors order[d..]
    let mut suffix = vec![vec![0.0; m]; n + 1];
    for d in (0..n).rev() {
        for t in 0..m {
            suffix[d][t] = suffix[d + 1][t] + rates.get(order[d], t);
        }
    }

    let greedy = solve_greedy(rates);
    let mut best_assigned = greedy.indicator.assignments().to_vec();
    let mut best_z = greedy.bottleneck;
    let mut nodes: u64 = 0;
    let mut truncated = false;

    // Conservative slack so float rounding in (sums + suffix) can never prune
    // a strictly better completion.
    let slack = 1e-9 * (1.0 + best_z.abs());

    struct Frame {
        depth: usize,
        choices: Vec<usize>,
        next: usize,
    }

    let mut sums = vec![0.0; m];
    let mut partial = vec![0usize; n];
    let mut stack: Vec<Frame> = Vec::with_capacity(n + 1);

    let order_children = |sums: &[f64]| -> Vec<usize> {
        let mut ts: Vec<usize> = (0..m).collect();
        ts.sort_by(|&a, &b| sums[a].partial_cmp(&sums[b]).unwrap().then(a.cmp(&b)));
        ts
    };

    stack.push(Frame { depth: 0, choices: order_children(&sums), next: 0 });

    'search: while let Some(frame) = stack.last_mut() {
        let depth = frame.depth;
        if frame.next >= frame.choices.len() {
            stack.pop();
            if let Some(parent) = stack.last() {
                let t = partial[order[parent.depth]];
                sums[t] -= rates.get(order[parent.depth], t);
            }
            continue;
        }
        let t = frame.choices[frame.next];
        frame.next += 1;

        nodes += 1;
        if nodes > node_limit {
            truncated = true;
            break 'search;
        }

        let reflector = order[depth];
        sums[t] += rates.get(reflector, t);
        partial[reflector] = t;

        if depth + 1 == n {
            // Leaf: canonical re-evaluation keeps the reported value on the
            // same arithmetic path as the brute-force oracle.
            let (_, z) = evaluate_assignment(rates, &partial);
            if z > best_z {
                best_z = z;
                best_assigned.copy_from_slice(&partial);
            }
            sums[t] -= rates.get(reflector, t);
            continue;
        }

        // Upper bound on any completion below this node.
        let mut bound = f64::INFINITY;
        for tt in 0..m {
            let b = sums[tt] + suffix[depth + 1][tt];
            if b < bound {
                bound = b;
            }
        }

        if bound <= best_z - slack {
            sums[t] -= rates.get(reflector, t);
            continue;
        }

        let choices = order_children(&sums);
        stack.push(Frame { depth: depth + 1, choices, next: 0 });
    }

    solution_from(rates, best_assigned, !truncated, nodes)
}

/// Co-phasing: cancel each assigned path phase so every term of the
/// coherent sum lands on the positive real axis.
pub fn co_phase(link: &CascadedLink, indicator: &IndicatorMatrix) -> Result<PhaseVector> {
    let n = link.num_reflectors();
    if indicator.num_reflectors() != n || indicator.num_trains() != link.num_trains() {
        return Err(Error::DimensionMismatch("indicator does not match link dimensions".into()));
    }
    let theta = (0..n)
        .map(|i| link.path_phase[i][indicator.train_of(i)])
        .collect();
    Ok(PhaseVector::new(theta))
}

/// Assemble the per-train masked diagonal matrix alpha * e^{j theta_n} * i_{n,m}.
pub fn build_phase_matrix(
    theta: &PhaseVector,
    indicator: &IndicatorMatrix,
    alpha: f64,
) -> Result<PhaseShiftMatrix> {
    if theta.len() != indicator.num_reflectors() {
        return Err(Error::DimensionMismatch(
            "phase vector length must equal reflector count".into(),
        ));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha must be in (0, 1], got {alpha}")));
    }
    let m = indicator.num_trains();
    let n = indicator.num_reflectors();
    let mut diagonals = vec![vec![Complex64::new(0.0, 0.0); n]; m];
    for i in 0..n {
        let t = indicator.train_of(i);
        diagonals[t][i] = Complex64::from_polar(alpha, theta.theta[i]);
    }
    Ok(PhaseShiftMatrix { diagonals })
}
