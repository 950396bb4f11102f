//! Episodic environment: UAV motion under speed/altitude constraints, per-step
//! assignment re-solves, and the rate-improvement reward.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assign::{
    co_phase, solve_exact, AssignmentSolution, IndicatorMatrix, PhaseVector,
};
use crate::channel::{cascaded_link, per_reflector_rate_matrix, rate, snr_for_train};
use crate::error::{Error, Result};
use crate::geometry::compute_geometry;
use crate::scenario::{ScenarioConfig, TrackConfig};
use crate::vec3::Vec3;

/// Positions of everything plus the slot clock.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub bs: Vec3,
    pub uav: Vec3,
    pub hsts: Vec<Vec3>,
    /// Completed outer slots k.
    pub slot: usize,
    /// Inner steps taken within the current slot.
    pub inner: usize,
}

/// Normalized UAV movement command.
///
/// `dx` moves along world x, `dl` changes altitude (world z), `dz` moves
/// along world y. Components are clamped to [-1, 1] and the combined step
/// is capped so the displacement never exceeds `v_max * slot_dt / T_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Action {
    pub dx: f64,
    pub dl: f64,
    pub dz: f64,
}

impl Action {
    pub fn new(dx: f64, dl: f64, dz: f64) -> Self {
        Action { dx, dl, dz }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Action { dx: a[0], dl: a[1], dz: a[2] }
    }

    /// World displacement of this action under the per-step speed cap.
    pub fn displacement(&self, cfg: &ScenarioConfig) -> Vec3 {
        let mut a = [
            self.dx.clamp(-1.0, 1.0),
            self.dl.clamp(-1.0, 1.0),
            self.dz.clamp(-1.0, 1.0),
        ];
        for c in &mut a {
            if !c.is_finite() {
                *c = 0.0;
            }
        }
        let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        if norm > 1.0 {
            for c in &mut a {
                *c /= norm;
            }
        }
        let s = cfg.action_step();
        Vec3::new(a[0] * s, a[2] * s, a[1] * s)
    }
}

/// How the per-slot reflector configuration is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotStrategy {
    /// Exact max-min assignment (greedy-seeded branch-and-bound incumbent
    /// past the node budget) with co-phased reflectors.
    ExactCoPhase,
    /// Fixed contiguous equal blocks of reflectors per train, co-phased.
    StaticBlocksCoPhase,
    /// Uniform random row-valid indicator and uniform random phases.
    RandomIndicatorRandomPhase,
}

/// Result of fully evaluating one UAV/train configuration.
#[derive(Debug, Clone)]
pub struct SlotEvaluation {
    /// Minimum coherent achievable rate over trains, bits/s.
    pub min_rate: f64,
    /// Coherent per-train rates, bits/s.
    pub per_train_rate: Vec<f64>,
    /// Assignment and its additive surrogate values.
    pub solution: AssignmentSolution,
    pub phases: PhaseVector,
    /// Wall-clock of the assignment solve, seconds.
    pub solve_seconds: f64,
    /// Whether every train meets the required minimum rate R0.
    pub c2_feasible: bool,
    /// Number of phases outside (0, pi/2); only when the check is enabled.
    pub phase_cap_violations: Option<usize>,
}

/// Static contiguous block assignment: floor(N/M) reflectors each, the first
/// N mod M trains take one extra.
pub fn static_block_indicator(num_reflectors: usize, num_trains: usize) -> IndicatorMatrix {
    let base = num_reflectors / num_trains;
    let extra = num_reflectors % num_trains;
    let mut assigned = Vec::with_capacity(num_reflectors);
    for m in 0..num_trains {
        let count = base + usize::from(m < extra);
        assigned.extend(std::iter::repeat(m).take(count));
    }
    // M > N leaves trailing trains empty; the assignment list is already N long.
    assigned.truncate(num_reflectors);
    while assigned.len() < num_reflectors {
        assigned.push(num_trains - 1);
    }
    IndicatorMatrix::new(assigned, num_trains).expect("valid block assignment")
}

/// Solve the configured slot strategy at the given positions and compute the
/// coherent per-train rates.
pub fn evaluate_state(
    state: &WorldState,
    cfg: &ScenarioConfig,
    strategy: SlotStrategy,
    mut rng: Option<&mut ChaCha8Rng>,
) -> Result<SlotEvaluation> {
    let geom = compute_geometry(state.bs, state.uav, &state.hsts, &cfg.panel)?;
    let link = cascaded_link(&geom, &cfg.panel, &cfg.link_budget())?;
    let rates = per_reflector_rate_matrix(&link, cfg.tx_power, cfg.noise_power, cfg.bandwidth)?;

    let t0 = std::time::Instant::now();
    let (solution, phases) = match strategy {
        SlotStrategy::ExactCoPhase => {
            let sol = solve_exact(&rates, cfg.node_limit);
            let phases = co_phase(&link, &sol.indicator)?;
            (sol, phases)
        }
        SlotStrategy::StaticBlocksCoPhase => {
            let ind = static_block_indicator(rates.num_reflectors(), rates.num_trains());
            let (per_train_rate, bottleneck) =
                crate::assign::evaluate_assignment(&rates, ind.assignments());
            let phases = co_phase(&link, &ind)?;
            (
                AssignmentSolution {
                    indicator: ind,
                    per_train_rate,
                    bottleneck,
                    optimal: false,
                    nodes_explored: 0,
                },
                phases,
            )
        }
        SlotStrategy::RandomIndicatorRandomPhase => {
            let rng = rng.as_deref_mut().ok_or_else(|| {
                Error::Usage("random slot strategy needs an RNG".into())
            })?;
            let n = rates.num_reflectors();
            let m = rates.num_trains();
            let assigned: Vec<usize> = (0..n).map(|_| rng.random_range(0..m)).collect();
            let ind = IndicatorMatrix::new(assigned, m)?;
            let (per_train_rate, bottleneck) =
                crate::assign::evaluate_assignment(&rates, ind.assignments());
            let theta: Vec<f64> =
                (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
            (
                AssignmentSolution {
                    indicator: ind,
                    per_train_rate,
                    bottleneck,
                    optimal: false,
                    nodes_explored: 0,
                },
                PhaseVector::new(theta),
            )
        }
    };
    let solve_seconds = t0.elapsed().as_secs_f64();

    let m = rates.num_trains();
    let mut per_train_rate = Vec::with_capacity(m);
    for t in 0..m {
        let mask = solution.indicator.column_mask(t);
        let snr = snr_for_train(
            &link,
            t,
            &mask,
            &phases.theta,
            cfg.tx_power,
            cfg.noise_power,
        )?;
        per_train_rate.push(rate(snr, cfg.bandwidth)?);
    }
    let min_rate = per_train_rate.iter().cloned().fold(f64::INFINITY, f64::min);

    let phase_cap_violations = cfg.enforce_phase_cap.then(|| {
        phases
            .theta
            .iter()
            .filter(|&&t| !(t > 0.0 && t < std::f64::consts::FRAC_PI_2))
            .count()
    });

    Ok(SlotEvaluation {
        c2_feasible: min_rate >= cfg.min_rate_req,
        min_rate,
        per_train_rate,
        solution,
        phases,
        solve_seconds,
        phase_cap_violations,
    })
}

/// Per-step report handed back by `Env::step`.
#[derive(Debug, Clone)]
pub struct StepInfo {
    /// Present unless the step terminated on the altitude constraint.
    pub eval: Option<SlotEvaluation>,
    /// min-rate change against the previous step.
    pub delta_min_rate: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub next_state: WorldState,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// Anything that maps observations to actions.
pub trait Policy {
    fn act(&mut self, obs: &[f64]) -> [f64; 3];
}

/// Stationary policy, useful as a scripted baseline.
pub struct ZeroPolicy;

impl Policy for ZeroPolicy {
    fn act(&mut self, _obs: &[f64]) -> [f64; 3] {
        [0.0; 3]
    }
}

fn norm_axis(v: f64, lo: f64, hi: f64) -> f64 {
    2.0 * (v - lo) / (hi - lo) - 1.0
}

/// Flattened positions of BS, UAV and all trains, normalized to [-1, 1] by
/// the scene bounds.
pub fn observation(cfg: &ScenarioConfig, state: &WorldState) -> Vec<f64> {
    let mut obs = Vec::with_capacity(cfg.obs_dim());
    let mut push = |p: Vec3| {
        obs.push(norm_axis(p.x, cfg.scene_min.x, cfg.scene_max.x));
        obs.push(norm_axis(p.y, cfg.scene_min.y, cfg.scene_max.y));
        obs.push(norm_axis(p.z, cfg.scene_min.z, cfg.scene_max.z));
    };
    push(state.bs);
    push(state.uav);
    for h in &state.hsts {
        push(*h);
    }
    obs
}

/// The training environment. One instance is owned by one worker.
pub struct Env {
    cfg: ScenarioConfig,
    state: WorldState,
    track: TrackConfig,
    r_bar_pre: f64,
    initial_min_rate: f64,
    done: bool,
}

impl Env {
    pub fn new(cfg: ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let mut env = Env {
            track: cfg.track.clone(),
            state: WorldState {
                bs: cfg.bs_position,
                uav: cfg.uav_start,
                hsts: Vec::new(),
                slot: 0,
                inner: 0,
            },
            cfg,
            r_bar_pre: 0.0,
            initial_min_rate: 0.0,
            done: true,
        };
        env.reset(false, env.cfg.seed)?;
        Ok(env)
    }

    pub fn cfg(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn state(&self) -> &WorldState {
        &self.state
    }

    /// min-rate of the configuration the last step (or reset) produced.
    pub fn last_min_rate(&self) -> f64 {
        self.r_bar_pre
    }

    pub fn initial_min_rate(&self) -> f64 {
        self.initial_min_rate
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn observation(&self) -> Vec<f64> {
        observation(&self.cfg, &self.state)
    }

    fn train_positions(&self, slot: usize) -> Vec<Vec3> {
        let travel = self.cfg.v_train * self.cfg.slot_dt * slot as f64;
        (0..self.cfg.num_trains)
            .map(|m| self.track.train_position(m, travel))
            .collect()
    }

    /// Start a new episode. With `randomize` the BS position and the train
    /// pack's start offset are redrawn inside the configured bounds; the UAV
    /// always starts at the configured initial position.
    pub fn reset(&mut self, randomize: bool, seed: u64) -> Result<&WorldState> {
        if randomize {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lo = self.cfg.randomize_bs_min;
            let hi = self.cfg.randomize_bs_max;
            let sample = |rng: &mut ChaCha8Rng, a: f64, b: f64| {
                if b > a {
                    rng.random_range(a..b)
                } else {
                    a
                }
            };
            self.state.bs = Vec3::new(
                sample(&mut rng, lo.x, hi.x),
                sample(&mut rng, lo.y, hi.y),
                0.0,
            );
            let (h_lo, h_hi) = self.cfg.randomize_head_range;
            let head = sample(&mut rng, h_lo, h_hi);
            let base = self.cfg.track.offsets[0];
            self.track = TrackConfig {
                start: self.cfg.track.start,
                end: self.cfg.track.end,
                offsets: self
                    .cfg
                    .track
                    .offsets
                    .iter()
                    .map(|o| o - base + head)
                    .collect(),
            };
        } else {
            self.state.bs = self.cfg.bs_position;
            self.track = self.cfg.track.clone();
        }
        self.state.uav = self.cfg.uav_start;
        self.state.slot = 0;
        self.state.inner = 0;
        self.state.hsts = self.train_positions(0);
        let eval = self.min_rate()?;
        self.r_bar_pre = eval.min_rate;
        self.initial_min_rate = eval.min_rate;
        self.done = false;
        Ok(&self.state)
    }

    /// Exact assignment + co-phasing at the current positions.
    pub fn min_rate(&self) -> Result<SlotEvaluation> {
        evaluate_state(&self.state, &self.cfg, SlotStrategy::ExactCoPhase, None)
    }

    /// Advance one inner step: move the UAV, apply the reward cases, and
    /// advance the trains when the slot boundary is reached.
    pub fn step(&mut self, action: Action) -> Result<StepOutcome> {
        if self.done {
            return Err(Error::Usage("episode is over; call reset first".into()));
        }
        let disp = action.displacement(&self.cfg);
        self.state.uav = self.state.uav + disp;

        let altitude = self.state.uav.z;
        let outcome = if altitude > self.cfg.altitude_max || altitude < self.cfg.altitude_min {
            self.done = true;
            StepOutcome {
                next_state: self.state.clone(),
                reward: -1.0,
                done: true,
                info: StepInfo { eval: None, delta_min_rate: None },
            }
        } else {
            let eval = evaluate_state(&self.state, &self.cfg, SlotStrategy::ExactCoPhase, None)?;
            let delta = eval.min_rate - self.r_bar_pre;
            let (reward, done) = if delta > 0.0 && eval.min_rate >= self.cfg.min_rate_req {
                (delta * self.cfg.reward_scale, false)
            } else {
                (0.0, true)
            };
            self.r_bar_pre = eval.min_rate;
            self.done = done;
            StepOutcome {
                next_state: self.state.clone(),
                reward,
                done,
                info: StepInfo { eval: Some(eval), delta_min_rate: Some(delta) },
            }
        };

        // slot clock: trains jump at outer-slot boundaries only
        self.state.inner += 1;
        if self.state.inner >= self.cfg.inner_steps {
            self.state.inner = 0;
            self.state.slot += 1;
            self.state.hsts = self.train_positions(self.state.slot);
        }

        Ok(StepOutcome { next_state: self.state.clone(), ..outcome })
    }
}

/// One logged evaluation step of a schedule run.
#[derive(Debug, Clone)]
pub struct StepRecord {
    /// Outer slot, 1-based.
    pub slot: usize,
    /// Inner step within the slot, 1-based.
    pub inner: usize,
    pub uav: Vec3,
    pub min_rate: f64,
    pub surrogate: f64,
    /// Reward case that would have fired in training (logged only).
    pub reward: f64,
    pub done_flag: bool,
    pub solve_seconds: f64,
}

/// Full output of a schedule run: trajectory, phase schedule, per-step records.
#[derive(Debug, Clone)]
pub struct EpisodeRun {
    pub records: Vec<StepRecord>,
    pub phases: Vec<PhaseVector>,
    pub trajectory: Vec<Vec3>,
}

/// Evaluation-run options for the schedule runner.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub strategy: SlotStrategy,
    /// Move the UAV with the policy, or keep it parked.
    pub move_uav: bool,
    /// Pin the altitude to a fixed value after every move.
    pub altitude_clamp: Option<f64>,
    /// Seed for the random strategy draws.
    pub rng_seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            strategy: SlotStrategy::ExactCoPhase,
            move_uav: true,
            altitude_clamp: None,
            rng_seed: 0,
        }
    }
}

/// Run the per-slot alternation over the full horizon: each inner step first
/// solves the reflector configuration at the current positions, then takes
/// one policy step. Episodes are never terminated here; the training reward
/// cases are logged per record.
pub fn run_schedule(
    cfg: &ScenarioConfig,
    policy: &mut dyn Policy,
    opts: &RunOptions,
) -> Result<EpisodeRun> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let mut state = WorldState {
        bs: cfg.bs_position,
        uav: cfg.uav_start,
        hsts: Vec::new(),
        slot: 0,
        inner: 0,
    };
    if !opts.move_uav {
        state.uav = cfg.static_uav_position();
    }
    if let Some(h) = opts.altitude_clamp {
        state.uav.z = h;
    }
    let clamp_altitude = |uav: &mut Vec3| {
        uav.z = uav.z.clamp(cfg.altitude_min, cfg.altitude_max);
    };
    clamp_altitude(&mut state.uav);

    let mut records = Vec::with_capacity(cfg.slots * cfg.inner_steps);
    let mut phases = Vec::with_capacity(records.capacity());
    let mut trajectory = Vec::with_capacity(records.capacity());
    let mut r_pre: Option<f64> = None;

    for k in 1..=cfg.slots {
        let travel = cfg.v_train * cfg.slot_dt * (k - 1) as f64;
        state.hsts = (0..cfg.num_trains)
            .map(|m| cfg.track.train_position(m, travel))
            .collect();
        state.slot = k - 1;
        for t in 1..=cfg.inner_steps {
            state.inner = t - 1;
            let eval = evaluate_state(&state, cfg, opts.strategy, Some(&mut rng))?;
            let (reward, done_flag) = match r_pre {
                Some(prev) => {
                    let delta = eval.min_rate - prev;
                    if delta > 0.0 && eval.min_rate >= cfg.min_rate_req {
                        (delta * cfg.reward_scale, false)
                    } else {
                        (0.0, true)
                    }
                }
                None => (0.0, false),
            };
            r_pre = Some(eval.min_rate);
            records.push(StepRecord {
                slot: k,
                inner: t,
                uav: state.uav,
                min_rate: eval.min_rate,
                surrogate: eval.solution.bottleneck,
                reward,
                done_flag,
                solve_seconds: eval.solve_seconds,
            });
            phases.push(eval.phases.clone());
            trajectory.push(state.uav);

            if opts.move_uav {
                let obs = observation(cfg, &state);
                let action = Action::from_array(policy.act(&obs));
                state.uav = state.uav + action.displacement(cfg);
                if let Some(h) = opts.altitude_clamp {
                    state.uav.z = h;
                }
                clamp_altitude(&mut state.uav);
            }
        }
    }
    Ok(EpisodeRun { records, phases, trajectory })
}

/// The per-slot alternation with the exact assignment and co-phasing,
/// driven by a trajectory policy over the configured horizon.
pub fn run_algorithm1(cfg: &ScenarioConfig, policy: &mut dyn Policy) -> Result<EpisodeRun> {
    run_schedule(
        cfg,
        policy,
        &RunOptions { rng_seed: cfg.seed, ..RunOptions::default() },
    )
}
