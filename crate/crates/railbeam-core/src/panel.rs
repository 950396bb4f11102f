use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Reflector panel mounted under the UAV.
///
/// Reflectors sit on a `grid_nx` x `grid_ny` grid in the plane orthogonal to
/// `normal`, centered on the UAV position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrsPanel {
    pub grid_nx: usize,
    pub grid_ny: usize,
    /// Reflector spacing along the two panel axes, meters.
    pub spacing_x: f64,
    pub spacing_y: f64,
    /// Fixed amplitude reflection coefficient, in (0, 1].
    pub amplitude: f64,
    /// Unit boresight direction of the panel.
    pub normal: Vec3,
}

impl IrsPanel {
    pub fn new(
        grid_nx: usize,
        grid_ny: usize,
        spacing_x: f64,
        spacing_y: f64,
        amplitude: f64,
        normal: Vec3,
    ) -> Result<Self> {
        let panel = IrsPanel { grid_nx, grid_ny, spacing_x, spacing_y, amplitude, normal };
        panel.validate()?;
        Ok(panel)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_nx * self.grid_ny < 1 {
            return Err(Error::InvalidConfig("panel must have at least one reflector".into()));
        }
        if self.spacing_x <= 0.0 || self.spacing_y <= 0.0 {
            return Err(Error::InvalidConfig("reflector spacing must be positive".into()));
        }
        if !(self.amplitude > 0.0 && self.amplitude <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "reflection amplitude must be in (0, 1], got {}",
                self.amplitude
            )));
        }
        if !self.normal.is_finite() || (self.normal.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig("panel normal must be a unit vector".into()));
        }
        Ok(())
    }

    /// Total reflector count N.
    pub fn num_reflectors(&self) -> usize {
        self.grid_nx * self.grid_ny
    }

    /// Orthonormal in-plane axes (u, v) spanning the panel plane.
    ///
    /// Deterministic for a given normal: the helper axis is world-x unless the
    /// normal is nearly parallel to it.
    pub fn plane_axes(&self) -> (Vec3, Vec3) {
        let helper = if self.normal.x.abs() > 0.9 {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(1.0, 0.0, 0.0)
        };
        let u = self.normal.cross(helper).normalized();
        let v = self.normal.cross(u);
        (u, v)
    }

    /// Grid offsets of every reflector from the panel center, row-major over
    /// (ix, iy), expressed in world coordinates.
    pub fn reflector_offsets(&self) -> Vec<Vec3> {
        let (u, v) = self.plane_axes();
        let cx = (self.grid_nx as f64 - 1.0) / 2.0;
        let cy = (self.grid_ny as f64 - 1.0) / 2.0;
        let mut offsets = Vec::with_capacity(self.num_reflectors());
        for ix in 0..self.grid_nx {
            for iy in 0..self.grid_ny {
                let du = (ix as f64 - cx) * self.spacing_x;
                let dv = (iy as f64 - cy) * self.spacing_y;
                offsets.push(u.scaled(du) + v.scaled(dv));
            }
        }
        offsets
    }
}

impl Default for IrsPanel {
    /// 10x10 grid, 0.01 m spacing, unit amplitude, boresight straight down.
    fn default() -> Self {
        IrsPanel {
            grid_nx: 10,
            grid_ny: 10,
            spacing_x: 0.01,
            spacing_y: 0.01,
            amplitude: 1.0,
            normal: Vec3::new(0.0, 0.0, -1.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_panel_spans_nine_centimeters_per_axis() {
        let panel = IrsPanel::default();
        let offsets = panel.reflector_offsets();
        assert_eq!(offsets.len(), 100);
        let (u, v) = panel.plane_axes();
        let us: Vec<f64> = offsets.iter().map(|o| o.dot(u)).collect();
        let vs: Vec<f64> = offsets.iter().map(|o| o.dot(v)).collect();
        let span_u = us.iter().cloned().fold(f64::MIN, f64::max)
            - us.iter().cloned().fold(f64::MAX, f64::min);
        let span_v = vs.iter().cloned().fold(f64::MIN, f64::max)
            - vs.iter().cloned().fold(f64::MAX, f64::min);
        assert!((span_u - 0.09).abs() < 1e-12);
        assert!((span_v - 0.09).abs() < 1e-12);
    }

    #[test]
    fn single_reflector_panel_sits_at_center() {
        let panel =
            IrsPanel::new(1, 1, 0.01, 0.01, 1.0, Vec3::new(0.0, 0.0, -1.0)).unwrap();
        let offsets = panel.reflector_offsets();
        assert_eq!(offsets.len(), 1);
        assert!(offsets[0].norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_amplitude_and_spacing() {
        assert!(IrsPanel::new(2, 2, 0.01, 0.01, 0.0, Vec3::new(0.0, 0.0, -1.0)).is_err());
        assert!(IrsPanel::new(2, 2, 0.01, 0.01, 1.5, Vec3::new(0.0, 0.0, -1.0)).is_err());
        assert!(IrsPanel::new(2, 2, -1.0, 0.01, 1.0, Vec3::new(0.0, 0.0, -1.0)).is_err());
        assert!(IrsPanel::new(2, 2, 0.01, 0.01, 1.0, Vec3::new(0.0, 0.0, -2.0)).is_err());
    }

    #[test]
    fn plane_axes_are_orthonormal_to_normal() {
        for normal in [
            Vec3::new(0.0, 0.0, -1.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.6, 0.0, -0.8),
        ] {
            let panel = IrsPanel::new(2, 2, 0.01, 0.01, 1.0, normal).unwrap();
            let (u, v) = panel.plane_axes();
            assert!((u.norm() - 1.0).abs() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!(u.dot(normal).abs() < 1e-12);
            assert!(v.dot(normal).abs() < 1e-12);
            assert!(u.dot(v).abs() < 1e-12);
        }
    }
}
