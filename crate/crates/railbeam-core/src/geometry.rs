//! Distance and angle extraction for the BS -> panel -> train cascade.

use crate::error::{Error, Result};
use crate::panel::IrsPanel;
use crate::vec3::Vec3;

/// Distances and angles of one BS / UAV / trains constellation.
///
/// Elevations are measured from the panel normal at the panel center;
/// azimuths are measured in the panel plane. Per-reflector distances use the
/// individual reflector positions on the grid.
#[derive(Debug, Clone)]
pub struct ChannelGeometry {
    /// BS to panel center distance.
    pub d_bu: f64,
    /// Panel center to train m distance.
    pub d_um: Vec<f64>,
    /// Elevation/azimuth of the BS seen from the panel center.
    pub theta_t: f64,
    pub phi_t: f64,
    /// Elevation/azimuth of each train seen from the panel center.
    pub theta_r: Vec<f64>,
    pub phi_r: Vec<f64>,
    /// BS to reflector n distance.
    pub d_bu_n: Vec<f64>,
    /// Reflector n to train m distance, indexed [n][m].
    pub d_nm: Vec<Vec<f64>>,
}

const MIN_SEPARATION: f64 = 1e-9;

fn angles_from(panel: &IrsPanel, u: Vec3, v: Vec3, dir: Vec3) -> (f64, f64) {
    let cos_theta = dir.dot(panel.normal).clamp(-1.0, 1.0);
    let theta = cos_theta.acos();
    let mut phi = dir.dot(v).atan2(dir.dot(u));
    if phi < 0.0 {
        phi += 2.0 * std::f64::consts::PI;
    }
    if phi >= 2.0 * std::f64::consts::PI {
        phi = 0.0;
    }
    (theta, phi)
}

/// Extract all distances and angles for a constellation.
///
/// The UAV must be strictly above ground and no two relevant points may
/// coincide.
pub fn compute_geometry(
    bs: Vec3,
    uav: Vec3,
    hsts: &[Vec3],
    panel: &IrsPanel,
) -> Result<ChannelGeometry> {
    for (name, p) in [("bs", bs), ("uav", uav)] {
        if !p.is_finite() {
            return Err(Error::Domain(format!("{name} position is not finite")));
        }
    }
    if hsts.is_empty() {
        return Err(Error::Domain("at least one train position required".into()));
    }
    if uav.z <= 0.0 {
        return Err(Error::DegenerateGeometry(format!(
            "UAV must be strictly above ground, altitude {}",
            uav.z
        )));
    }

    let (u_axis, v_axis) = panel.plane_axes();
    let offsets = panel.reflector_offsets();

    let to_bs = bs - uav;
    let d_bu = to_bs.norm();
    if d_bu < MIN_SEPARATION {
        return Err(Error::DegenerateGeometry("BS coincides with the UAV".into()));
    }
    let (theta_t, phi_t) = angles_from(panel, u_axis, v_axis, to_bs.scaled(1.0 / d_bu));

    let mut d_um = Vec::with_capacity(hsts.len());
    let mut theta_r = Vec::with_capacity(hsts.len());
    let mut phi_r = Vec::with_capacity(hsts.len());
    for (m, hst) in hsts.iter().enumerate() {
        if !hst.is_finite() {
            return Err(Error::Domain(format!("train {m} position is not finite")));
        }
        let to_hst = *hst - uav;
        let d = to_hst.norm();
        if d < MIN_SEPARATION {
            return Err(Error::DegenerateGeometry(format!("train {m} coincides with the UAV")));
        }
        let (th, ph) = angles_from(panel, u_axis, v_axis, to_hst.scaled(1.0 / d));
        d_um.push(d);
        theta_r.push(th);
        phi_r.push(ph);
    }

    let mut d_bu_n = Vec::with_capacity(offsets.len());
    let mut d_nm = Vec::with_capacity(offsets.len());
    for off in &offsets {
        let pos = uav + *off;
        let db = bs.distance(pos);
        if db < MIN_SEPARATION {
            return Err(Error::DegenerateGeometry("BS coincides with a reflector".into()));
        }
        d_bu_n.push(db);
        let mut row = Vec::with_capacity(hsts.len());
        for (m, hst) in hsts.iter().enumerate() {
            let dm = hst.distance(pos);
            if dm < MIN_SEPARATION {
                return Err(Error::DegenerateGeometry(format!(
                    "train {m} coincides with a reflector"
                )));
            }
            row.push(dm);
        }
        d_nm.push(row);
    }

    Ok(ChannelGeometry { d_bu, d_um, theta_t, phi_t, theta_r, phi_r, d_bu_n, d_nm })
}
