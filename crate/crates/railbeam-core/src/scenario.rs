//! Scenario configuration: physical constants, geometry, episode settings.
//!
//! Scenarios load from JSON. Any power/gain field accepts either a plain
//! number (linear units) or a string with an explicit "dB"/"dBm" suffix.
//! Vector fields may come from a y-up scene export: with `"y_up": true` the
//! 2nd and 3rd components of every position are swapped on import.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::LinkBudget;
use crate::error::{Error, Result};
use crate::panel::IrsPanel;
use crate::vec3::Vec3;

/// Straight-line track carrying the trains.
///
/// Train m sits at `start + dir * (offsets[m] + v_train * t)` where `dir`
/// is the unit start->end direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackConfig {
    pub start: Vec3,
    pub end: Vec3,
    /// Per-train arc-length offsets from the track start, meters.
    pub offsets: Vec<f64>,
}

impl TrackConfig {
    pub fn direction(&self) -> Vec3 {
        (self.end - self.start).normalized()
    }

    /// Position of train `m` after `travel` meters of motion.
    pub fn train_position(&self, m: usize, travel: f64) -> Vec3 {
        self.start + self.direction().scaled(self.offsets[m] + travel)
    }
}

/// Everything a run needs: link budget, panel, kinematics, RL settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    /// Path power gain at the reference distance (linear).
    pub rho0: f64,
    /// Reference distance, meters.
    pub d0: f64,
    /// BS bandwidth, Hz.
    pub bandwidth: f64,
    /// Noise power, watts.
    pub noise_power: f64,
    /// Transmit power, watts.
    pub tx_power: f64,
    pub delta_bu: f64,
    pub delta_ut: f64,
    /// Number of trains M.
    pub num_trains: usize,
    pub panel: IrsPanel,
    /// Train speed, m/s.
    pub v_train: f64,
    /// UAV speed limit, m/s.
    pub v_max: f64,
    pub altitude_min: f64,
    pub altitude_max: f64,
    /// Minimum required rate R0, bits/s.
    pub min_rate_req: f64,
    /// Outer time slots K.
    pub slots: usize,
    /// Slot duration, seconds.
    pub slot_dt: f64,
    /// Inner steps per slot T_max.
    pub inner_steps: usize,
    pub bs_position: Vec3,
    pub track: TrackConfig,
    /// Carrier wavelength, meters.
    pub wavelength: f64,
    pub seed: u64,
    /// Initial UAV position.
    pub uav_start: Vec3,
    /// Scene bounding box used for observation normalization.
    pub scene_min: Vec3,
    pub scene_max: Vec3,
    /// Reward units per bit/s of min-rate improvement.
    pub reward_scale: f64,
    /// Branch-and-bound node budget per assignment solve.
    pub node_limit: u64,
    /// When set, co-phasing results are checked against the (0, pi/2)
    /// phase-shift cap and violations are reported in step info.
    pub enforce_phase_cap: bool,
    /// Static UAV position for the fixed-UAV baseline; when absent the
    /// midpoint between BS and track midpoint at 100 m altitude is used.
    pub static_uav: Option<Vec3>,
    /// Per-seed jitter of the evaluation start position, meters.
    pub eval_jitter_xy: f64,
    pub eval_jitter_z: f64,
    /// Hard cap on training episode length, inner steps.
    pub max_episode_steps: usize,
    /// Sampling box for the BS position in randomized episodes.
    pub randomize_bs_min: Vec3,
    pub randomize_bs_max: Vec3,
    /// Sampling range for the lead-train start offset in randomized episodes.
    pub randomize_head_range: (f64, f64),
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            rho0: 0.01,           // -20 dB
            d0: 1.0,
            bandwidth: 20e6,
            noise_power: 1e-13,   // -100 dBm
            tx_power: 0.01,       // 10 dBm
            delta_bu: 2.6,
            delta_ut: 2.8,
            num_trains: 4,
            panel: IrsPanel::default(),
            v_train: 100.0,
            v_max: 55.0,
            altitude_min: 50.0,
            altitude_max: 400.0,
            min_rate_req: 1e6,
            slots: 10,
            slot_dt: 1.0,
            inner_steps: 10,
            bs_position: Vec3::new(550.0, 350.0, 0.0),
            track: TrackConfig {
                start: Vec3::new(0.0, 150.0, 0.0),
                end: Vec3::new(1100.0, 150.0, 0.0),
                offsets: vec![100.0, 40.0, -20.0, -80.0],
            },
            wavelength: 0.1,
            seed: 0,
            uav_start: Vec3::new(550.0, 250.0, 200.0),
            scene_min: Vec3::new(-300.0, 0.0, 0.0),
            scene_max: Vec3::new(1300.0, 600.0, 450.0),
            reward_scale: 1e-7,
            node_limit: 1_000_000,
            enforce_phase_cap: false,
            static_uav: None,
            eval_jitter_xy: 30.0,
            eval_jitter_z: 15.0,
            max_episode_steps: 100,
            randomize_bs_min: Vec3::new(400.0, 250.0, 0.0),
            randomize_bs_max: Vec3::new(700.0, 450.0, 0.0),
            randomize_head_range: (350.0, 650.0),
        }
    }
}

impl ScenarioConfig {
    /// The shipped benchmark scenario: default geometry with a link budget
    /// strong enough to put rates in the Mb/s range at scene distances, and
    /// a solver node budget sized for per-step re-solves.
    pub fn fig8() -> Self {
        ScenarioConfig {
            tx_power: 10.0,      // 40 dBm
            noise_power: 1e-14,  // -110 dBm
            min_rate_req: 1e5,
            node_limit: 20_000,
            ..ScenarioConfig::default()
        }
    }

    pub fn link_budget(&self) -> LinkBudget {
        LinkBudget {
            rho0: self.rho0,
            d0: self.d0,
            delta_bu: self.delta_bu,
            delta_ut: self.delta_ut,
            wavelength: self.wavelength,
        }
    }

    /// Maximum UAV displacement per inner step, meters.
    pub fn action_step(&self) -> f64 {
        self.v_max * self.slot_dt / self.inner_steps as f64
    }

    /// Observation dimension: 3 coordinates for BS, UAV and each train.
    pub fn obs_dim(&self) -> usize {
        3 * (self.num_trains + 2)
    }

    /// Static UAV position for the fixed-UAV baseline.
    pub fn static_uav_position(&self) -> Vec3 {
        self.static_uav.unwrap_or_else(|| {
            let track_mid = self.track.start + (self.track.end - self.track.start).scaled(0.5);
            let mid = self.bs_position + (track_mid - self.bs_position).scaled(0.5);
            Vec3::new(mid.x, mid.y, 100.0)
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.panel.validate()?;
        let positives = [
            ("bandwidth", self.bandwidth),
            ("noise_power", self.noise_power),
            ("tx_power", self.tx_power),
            ("rho0", self.rho0),
            ("d0", self.d0),
            ("v_max", self.v_max),
            ("slot_dt", self.slot_dt),
            ("wavelength", self.wavelength),
            ("reward_scale", self.reward_scale),
        ];
        for (name, v) in positives {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if self.v_train < 0.0 {
            return Err(Error::InvalidConfig("v_train must be non-negative".into()));
        }
        if !(self.altitude_min < self.altitude_max) {
            return Err(Error::InvalidConfig(format!(
                "altitude bounds must satisfy min < max, got [{}, {}]",
                self.altitude_min, self.altitude_max
            )));
        }
        if self.slots < 1 || self.inner_steps < 1 {
            return Err(Error::InvalidConfig("slots and inner_steps must be at least 1".into()));
        }
        if self.num_trains < 1 {
            return Err(Error::InvalidConfig("need at least one train".into()));
        }
        if self.track.offsets.len() != self.num_trains {
            return Err(Error::InvalidConfig(format!(
                "track offsets ({}) must match num_trains ({})",
                self.track.offsets.len(),
                self.num_trains
            )));
        }
        if (self.track.end - self.track.start).norm() < 1e-9 {
            return Err(Error::InvalidConfig("track start and end coincide".into()));
        }
        if self.min_rate_req < 0.0 {
            return Err(Error::InvalidConfig("min_rate_req must be non-negative".into()));
        }
        for (name, v) in [
            ("bs_position", self.bs_position),
            ("uav_start", self.uav_start),
            ("scene_min", self.scene_min),
            ("scene_max", self.scene_max),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be finite")));
            }
        }
        if self.scene_min.x >= self.scene_max.x
            || self.scene_min.y >= self.scene_max.y
            || self.scene_min.z >= self.scene_max.z
        {
            return Err(Error::InvalidConfig("scene_min must be strictly below scene_max".into()));
        }
        if self.max_episode_steps < 1 {
            return Err(Error::InvalidConfig("max_episode_steps must be at least 1".into()));
        }
        if self.randomize_head_range.0 > self.randomize_head_range.1 {
            return Err(Error::InvalidConfig("randomize_head_range must be ordered".into()));
        }
        Ok(())
    }

    /// Serialize with linear (already converted) values.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }
}

/// Parse a power/gain field: plain numbers are linear, strings need an
/// explicit "dB" or "dBm" suffix.
pub fn parse_level(value: &Value, field: &str) -> Result<f64> {
    match value {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::InvalidConfig(format!("{field}: bad number"))),
        Value::String(s) => {
            let t = s.trim();
            let lower = t.to_ascii_lowercase();
            if let Some(num) = lower.strip_suffix("dbm") {
                let v: f64 = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("{field}: cannot parse '{t}'")))?;
                Ok(10f64.powf(v / 10.0) * 1e-3)
            } else if let Some(num) = lower.strip_suffix("db") {
                let v: f64 = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("{field}: cannot parse '{t}'")))?;
                Ok(10f64.powf(v / 10.0))
            } else {
                t.parse::<f64>()
                    .map_err(|_| Error::InvalidConfig(format!("{field}: cannot parse '{t}'")))
            }
        }
        other => Err(Error::InvalidConfig(format!("{field}: expected number or string, got {other}"))),
    }
}

fn get_vec3(value: &Value, field: &str, y_up: bool) -> Result<Vec3> {
    let arr = value
        .as_array()
        .ok_or_else(|| Error::InvalidConfig(format!("{field}: expected [x, y, z]")))?;
    if arr.len() != 3 {
        return Err(Error::InvalidConfig(format!("{field}: expected 3 components")));
    }
    let mut comps = [0.0; 3];
    for (i, v) in arr.iter().enumerate() {
        comps[i] = v
            .as_f64()
            .ok_or_else(|| Error::InvalidConfig(format!("{field}: component {i} not a number")))?;
    }
    Ok(if y_up { Vec3::from_y_up(comps) } else { comps.into() })
}

fn get_f64(value: &Value, field: &str) -> Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| Error::InvalidConfig(format!("{field}: expected a number")))
}

fn get_usize(value: &Value, field: &str) -> Result<usize> {
    value
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::InvalidConfig(format!("{field}: expected a non-negative integer")))
}

/// Load a scenario from JSON text, overlaying onto the defaults.
///
/// Empty input yields the full default configuration.
pub fn scenario_from_json(text: &str) -> Result<ScenarioConfig> {
    if text.trim().is_empty() {
        return Ok(ScenarioConfig::default());
    }
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidConfig(format!("scenario parse error: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::InvalidConfig("scenario root must be a JSON object".into()))?;

    let mut cfg = ScenarioConfig::default();
    let y_up = obj.get("y_up").and_then(Value::as_bool).unwrap_or(false);

    let mut known = vec!["y_up".to_string()];
    let mut take = |name: &str| -> Option<&Value> {
        known.push(name.to_string());
        obj.get(name)
    };

    if let Some(v) = take("rho0") {
        cfg.rho0 = parse_level(v, "rho0")?;
    }
    if let Some(v) = take("d0_m") {
        cfg.d0 = get_f64(v, "d0_m")?;
    }
    if let Some(v) = take("bandwidth_hz") {
        cfg.bandwidth = get_f64(v, "bandwidth_hz")?;
    }
    if let Some(v) = take("noise_power_w") {
        cfg.noise_power = parse_level(v, "noise_power_w")?;
    }
    if let Some(v) = take("tx_power_w") {
        cfg.tx_power = parse_level(v, "tx_power_w")?;
    }
    if let Some(v) = take("delta_bu") {
        cfg.delta_bu = get_f64(v, "delta_bu")?;
    }
    if let Some(v) = take("delta_ut") {
        cfg.delta_ut = get_f64(v, "delta_ut")?;
    }
    if let Some(v) = take("num_trains") {
        cfg.num_trains = get_usize(v, "num_trains")?;
    }
    if let Some(v) = take("panel") {
        let p = v
            .as_object()
            .ok_or_else(|| Error::InvalidConfig("panel: expected an object".into()))?;
        if let Some(nx) = p.get("nx") {
            cfg.panel.grid_nx = get_usize(nx, "panel.nx")?;
        }
        if let Some(ny) = p.get("ny") {
            cfg.panel.grid_ny = get_usize(ny, "panel.ny")?;
        }
        if let Some(sx) = p.get("spacing_x_m") {
            cfg.panel.spacing_x = get_f64(sx, "panel.spacing_x_m")?;
        }
        if let Some(sy) = p.get("spacing_y_m") {
            cfg.panel.spacing_y = get_f64(sy, "panel.spacing_y_m")?;
        }
        if let Some(a) = p.get("amplitude") {
            cfg.panel.amplitude = get_f64(a, "panel.amplitude")?;
        }
        if let Some(nv) = p.get("normal") {
            cfg.panel.normal = get_vec3(nv, "panel.normal", y_up)?;
        }
    }
    if let Some(v) = take("v_train_mps") {
        cfg.v_train = get_f64(v, "v_train_mps")?;
    }
    if let Some(v) = take("v_max_mps") {
        cfg.v_max = get_f64(v, "v_max_mps")?;
    }
    if let Some(v) = take("altitude_min_m") {
        cfg.altitude_min = get_f64(v, "altitude_min_m")?;
    }
    if let Some(v) = take("altitude_max_m") {
        cfg.altitude_max = get_f64(v, "altitude_max_m")?;
    }
    if let Some(v) = take("min_rate_req_bps") {
        cfg.min_rate_req = get_f64(v, "min_rate_req_bps")?;
    }
    if let Some(v) = take("slots") {
        cfg.slots = get_usize(v, "slots")?;
    }
    if let Some(v) = take("slot_dt_s") {
        cfg.slot_dt = get_f64(v, "slot_dt_s")?;
    }
    if let Some(v) = take("inner_steps") {
        cfg.inner_steps = get_usize(v, "inner_steps")?;
    }
    if let Some(v) = take("bs_position_m") {
        cfg.bs_position = get_vec3(v, "bs_position_m", y_up)?;
    }
    if let Some(v) = take("track") {
        let t = v
            .as_object()
            .ok_or_else(|| Error::InvalidConfig("track: expected an object".into()))?;
        if let Some(s) = t.get("start_m") {
            cfg.track.start = get_vec3(s, "track.start_m", y_up)?;
        }
        if let Some(e) = t.get("end_m") {
            cfg.track.end = get_vec3(e, "track.end_m", y_up)?;
        }
        if let Some(o) = t.get("offsets_m") {
            let arr = o
                .as_array()
                .ok_or_else(|| Error::InvalidConfig("track.offsets_m: expected array".into()))?;
            cfg.track.offsets = arr
                .iter()
                .map(|x| get_f64(x, "track.offsets_m"))
                .collect::<Result<Vec<_>>>()?;
        }
    }
    if let Some(v) = take("wavelength_m") {
        cfg.wavelength = get_f64(v, "wavelength_m")?;
    }
    if let Some(v) = take("seed") {
        cfg.seed = v
            .as_u64()
            .ok_or_else(|| Error::InvalidConfig("seed: expected a non-negative integer".into()))?;
    }
    if let Some(v) = take("uav_start_m") {
        cfg.uav_start = get_vec3(v, "uav_start_m", y_up)?;
    }
    if let Some(v) = take("scene_min_m") {
        cfg.scene_min = get_vec3(v, "scene_min_m", y_up)?;
    }
    if let Some(v) = take("scene_max_m") {
        cfg.scene_max = get_vec3(v, "scene_max_m", y_up)?;
    }
    if let Some(v) = take("reward_scale") {
        cfg.reward_scale = get_f64(v, "reward_scale")?;
    }
    if let Some(v) = take("node_limit") {
        cfg.node_limit = v
            .as_u64()
            .ok_or_else(|| Error::InvalidConfig("node_limit: expected an integer".into()))?;
    }
    if let Some(v) = take("enforce_phase_cap") {
        cfg.enforce_phase_cap = v
            .as_bool()
            .ok_or_else(|| Error::InvalidConfig("enforce_phase_cap: expected a bool".into()))?;
    }
    if let Some(v) = take("static_uav_m") {
        if !v.is_null() {
            cfg.static_uav = Some(get_vec3(v, "static_uav_m", y_up)?);
        }
    }
    if let Some(v) = take("eval_jitter_xy_m") {
        cfg.eval_jitter_xy = get_f64(v, "eval_jitter_xy_m")?;
    }
    if let Some(v) = take("eval_jitter_z_m") {
        cfg.eval_jitter_z = get_f64(v, "eval_jitter_z_m")?;
    }
    if let Some(v) = take("max_episode_steps") {
        cfg.max_episode_steps = get_usize(v, "max_episode_steps")?;
    }
    if let Some(v) = take("randomize_bs_min_m") {
        cfg.randomize_bs_min = get_vec3(v, "randomize_bs_min_m", y_up)?;
    }
    if let Some(v) = take("randomize_bs_max_m") {
        cfg.randomize_bs_max = get_vec3(v, "randomize_bs_max_m", y_up)?;
    }
    if let Some(v) = take("randomize_head_range_m") {
        let arr = v.as_array().ok_or_else(|| {
            Error::InvalidConfig("randomize_head_range_m: expected [lo, hi]".into())
        })?;
        if arr.len() != 2 {
            return Err(Error::InvalidConfig("randomize_head_range_m: expected 2 values".into()));
        }
        cfg.randomize_head_range =
            (get_f64(&arr[0], "randomize_head_range_m")?, get_f64(&arr[1], "randomize_head_range_m")?);
    }

    // Comment-style keys (leading underscore) are allowed and ignored.
    for key in obj.keys() {
        if !key.starts_with('_') && !known.contains(key) {
            return Err(Error::InvalidConfig(format!("unknown scenario field '{key}'")));
        }
    }

    // Default offsets only fit the default train count; regenerate when M
    // changed but offsets were not given.
    if cfg.num_trains != cfg.track.offsets.len()
        && cfg.track.offsets == ScenarioConfig::default().track.offsets
    {
        cfg.track.offsets = (0..cfg.num_trains).map(|m| 100.0 - 60.0 * m as f64).collect();
    }

    cfg.validate()?;
    Ok(cfg)
}

/// Load a scenario file; whitespace-only files yield the defaults.
pub fn load_scenario(path: &std::path::Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    scenario_from_json(&text)
}

/// Overlay loader for configs already serialized by `to_json_string`
/// (linear values, native field names).
pub fn scenario_from_native_json(text: &str) -> Result<ScenarioConfig> {
    let cfg: ScenarioConfig = serde_json::from_str(text)
        .map_err(|e| Error::InvalidConfig(format!("scenario parse error: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_text_gives_table_defaults() {
        let cfg = scenario_from_json("  \n ").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_relative_eq!(cfg.rho0, 0.01, max_relative = 1e-12);
        assert_relative_eq!(cfg.noise_power, 1e-13, max_relative = 1e-12);
        assert_relative_eq!(cfg.tx_power, 0.01, max_relative = 1e-12);
        assert_eq!(cfg.bandwidth, 20e6);
        assert_eq!(cfg.num_trains, 4);
        assert_eq!(cfg.panel.num_reflectors(), 100);
        assert_eq!(cfg.v_train, 100.0);
        assert_eq!(cfg.v_max, 55.0);
        assert_eq!((cfg.delta_bu, cfg.delta_ut), (2.6, 2.8));
    }

    #[test]
    fn empty_object_gives_defaults_too() {
        assert_eq!(scenario_from_json("{}").unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn db_and_dbm_strings_convert() {
        let cfg = scenario_from_json(
            r#"{"rho0": "-20 dB", "noise_power_w": "-100 dBm", "tx_power_w": "10 dBm"}"#,
        )
        .unwrap();
        assert_relative_eq!(cfg.rho0, 0.01, max_relative = 1e-12);
        assert_relative_eq!(cfg.noise_power, 1e-13, max_relative = 1e-12);
        assert_relative_eq!(cfg.tx_power, 0.01, max_relative = 1e-12);
    }

    #[test]
    fn linear_numbers_pass_through() {
        let cfg = scenario_from_json(r#"{"rho0": 0.02, "tx_power_w": 5.0}"#).unwrap();
        assert_eq!(cfg.rho0, 0.02);
        assert_eq!(cfg.tx_power, 5.0);
    }

    #[test]
    fn y_up_swaps_position_components() {
        let cfg = scenario_from_json(r#"{"y_up": true, "bs_position_m": [550, 0, 350]}"#)
            .unwrap();
        assert_eq!(cfg.bs_position, Vec3::new(550.0, 350.0, 0.0));
    }

    #[test]
    fn unknown_fields_are_rejected_with_name() {
        let err = scenario_from_json(r#"{"bandwich_hz": 1e6}"#).unwrap_err();
        assert!(err.to_string().contains("bandwich_hz"));
    }

    #[test]
    fn comment_fields_are_ignored() {
        let cfg = scenario_from_json(
            r#"{"_note": "fixed IRS candidates: [[300,100,200],[800,100,200],[800,100,400]]"}"#,
        )
        .unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = scenario_from_json("{\n  \"rho0\": ,\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn invariant_violations_rejected() {
        assert!(scenario_from_json(r#"{"v_max_mps": 0.0}"#).is_err());
        assert!(scenario_from_json(r#"{"altitude_min_m": 300, "altitude_max_m": 100}"#).is_err());
        assert!(scenario_from_json(r#"{"slots": 0}"#).is_err());
        assert!(scenario_from_json(r#"{"bandwidth_hz": -5}"#).is_err());
        assert!(scenario_from_json(r#"{"num_trains": 3, "track": {"offsets_m": [1, 2]}}"#).is_err());
    }

    #[test]
    fn train_count_regenerates_default_offsets() {
        let cfg = scenario_from_json(r#"{"num_trains": 2}"#).unwrap();
        assert_eq!(cfg.track.offsets, vec![100.0, 40.0]);
    }

    #[test]
    fn emit_then_load_round_trips() {
        let cfg = ScenarioConfig::fig8();
        let text = cfg.to_json_string();
        let back = scenario_from_native_json(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn db_entry_agrees_with_linear_entry() {
        let a = scenario_from_json(r#"{"tx_power_w": "16 dBm"}"#).unwrap();
        let linear = 10f64.powf(1.6) * 1e-3;
        let b = scenario_from_json(&format!(r#"{{"tx_power_w": {linear}}}"#)).unwrap();
        assert_relative_eq!(a.tx_power, b.tx_power, max_relative = 1e-12);
    }

    #[test]
    fn static_uav_defaults_to_midpoint_at_100m() {
        let cfg = ScenarioConfig::default();
        let s = cfg.static_uav_position();
        assert_eq!(s, Vec3::new(550.0, 250.0, 100.0));
    }

    #[test]
    fn action_step_follows_speed_limit() {
        let cfg = ScenarioConfig::default();
        assert_relative_eq!(cfg.action_step(), 5.5, max_relative = 1e-12);
    }
}
