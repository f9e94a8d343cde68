//! Pose estimation: two extended Kalman filters per robot over the state
//! (x, y, theta).
//!
//! The odometry filter fuses encoders and the IMU heading; the global filter
//! additionally consumes GPS fixes. Prediction uses the same unicycle step as
//! the ground-truth integrator, so with zero sensor noise both filters track
//! the true pose exactly.

use nalgebra::{Matrix3, Vector2, Vector3};

use crate::params::{EkfParams, NoiseParams};
use crate::sensors::RawNavSamples;
use crate::world::{unicycle_delta, wrap_angle, Pose};

/// Gaussian belief over (x, y, theta).
#[derive(Debug, Clone, PartialEq)]
pub struct EkfState {
    pub mean: Vector3<f64>,
    pub cov: Matrix3<f64>,
}

impl EkfState {
    /// Initialize at a known pose with isotropic variance.
    pub fn at_pose(pose: &Pose, var: f64) -> Self {
        Self {
            mean: Vector3::new(pose.x, pose.y, pose.theta),
            cov: Matrix3::from_diagonal(&Vector3::new(var, var, var)),
        }
    }

    pub fn pose(&self) -> Pose {
        Pose::new(self.mean.x, self.mean.y, self.mean.z)
    }

    pub fn position(&self) -> (f64, f64) {
        (self.mean.x, self.mean.y)
    }

    pub fn heading(&self) -> f64 {
        self.mean.z
    }

    fn symmetrize(&mut self) {
        self.cov = (self.cov + self.cov.transpose()) * 0.5;
    }
}

/// Propagate the belief through the unicycle model with encoder controls.
///
/// Covariance maps through the motion Jacobian and grows by process noise
/// scaled with the commanded rates and the timestep.
pub fn ekf_predict(
    state: &mut EkfState,
    encoder_v: f64,
    encoder_omega: f64,
    dt: f64,
    params: &EkfParams,
    sigma_encoder: f64,
) {
    let (dx, dy, theta_new) = unicycle_delta(state.mean.z, encoder_v, encoder_omega, dt);
    state.mean.x += dx;
    state.mean.y += dy;
    state.mean.z = theta_new;

    // d(x,y)/d(theta) at the updated heading.
    let f02 = -encoder_v * theta_new.sin() * dt;
    let f12 = encoder_v * theta_new.cos() * dt;
    let f = Matrix3::new(1.0, 0.0, f02, 0.0, 1.0, f12, 0.0, 0.0, 1.0);

    let q_xy = params.q_pos_floor * dt + (sigma_encoder * encoder_v * dt).powi(2);
    let q_th = params.q_theta_floor * dt + (sigma_encoder * encoder_omega * dt).powi(2);
    let q = Matrix3::from_diagonal(&Vector3::new(q_xy, q_xy, q_th));

    state.cov = f * state.cov * f.transpose() + q;
    state.symmetrize();
}

/// Scalar update with an absolute heading measurement. The innovation is
/// wrapped so a measurement across the +-pi seam corrects the short way.
pub fn ekf_update_heading(state: &mut EkfState, imu_heading: f64, sigma_imu: f64) {
    let r = sigma_imu * sigma_imu;
    let s = state.cov[(2, 2)] + r;
    if s <= 0.0 {
        return;
    }
    let innovation = wrap_angle(imu_heading - state.mean.z);
    let k = state.cov.column(2) / s; // P H^T / S with H = [0 0 1]

    state.mean += k * innovation;
    state.mean.z = wrap_angle(state.mean.z);

    // Joseph form keeps the covariance symmetric PSD.
    let mut ikh = Matrix3::identity();
    ikh[(0, 2)] = -k[0];
    ikh[(1, 2)] = -k[1];
    ikh[(2, 2)] = 1.0 - k[2];
    state.cov = ikh * state.cov * ikh.transpose() + (k * k.transpose()) * r;
    state.symmetrize();
}

/// Planar position update from a GPS fix with isotropic variance.
pub fn ekf_update_gps(state: &mut EkfState, fix: (f64, f64), sigma_gps: f64) {
    let r = sigma_gps * sigma_gps;
    let s00 = state.cov[(0, 0)] + r;
    let s01 = state.cov[(0, 1)];
    let s11 = state.cov[(1, 1)] + r;
    let det = s00 * s11 - s01 * s01;
    if det <= 0.0 {
        return;
    }
    // S^-1 for the 2x2 innovation covariance.
    let inv00 = s11 / det;
    let inv01 = -s01 / det;
    let inv11 = s00 / det;

    // K = P H^T S^-1, H = [I2 0].
    let ph_t = state.cov.fixed_view::<3, 2>(0, 0).into_owned();
    let sinv = nalgebra::Matrix2::new(inv00, inv01, inv01, inv11);
    let k = ph_t * sinv;

    let innovation = Vector2::new(fix.0 - state.mean.x, fix.1 - state.mean.y);
    state.mean += k * innovation;
    state.mean.z = wrap_angle(state.mean.z);

    let mut kh = Matrix3::zeros();
    kh.fixed_view_mut::<3, 2>(0, 0).copy_from(&k);
    let ikh = Matrix3::identity() - kh;
    state.cov = ikh * state.cov * ikh.transpose() + k * nalgebra::Matrix2::from_diagonal_element(r) * k.transpose();
    state.symmetrize();
}

/// The two per-robot filters, advanced in lockstep once per tick.
#[derive(Debug, Clone)]
pub struct PoseEstimatePair {
    /// Encoders + IMU only: local, drift-prone far from absolute references.
    pub odom: EkfState,
    /// Encoders + IMU + GPS: globally bounded error.
    pub global: EkfState,
}

impl PoseEstimatePair {
    pub fn at_pose(pose: &Pose, params: &EkfParams) -> Self {
        Self {
            odom: EkfState::at_pose(pose, params.init_var),
            global: EkfState::at_pose(pose, params.init_var),
        }
    }

    /// Consume one tick of navigation samples. The odometry filter never
    /// sees the GPS fix.
    pub fn advance(
        &mut self,
        nav: &RawNavSamples,
        dt: f64,
        params: &EkfParams,
        noise: &NoiseParams,
    ) {
        for filter in [&mut self.odom, &mut self.global] {
            ekf_predict(filter, nav.encoder_v, nav.encoder_omega, dt, params, noise.sigma_encoder);
            ekf_update_heading(filter, nav.imu_heading, noise.sigma_imu);
        }
        if let Some(fix) = nav.gps_fix {
            ekf_update_gps(&mut self.global, fix, noise.sigma_gps);
        }
    }
}
