//! Random locally convex test curves.

#![allow(dead_code)]

use std::f64::consts::TAU;

use nalgebra::Matrix4;
use rand::Rng;
use spherocurve::frenet::{integrate_jacobian, jacobi_matrix, JacobianCurve};

/// Constant speed `s` with smooth positive curvature and torsion
/// `a + b sin(2 pi f t + phi)`, `|b| < a`.
#[derive(Debug, Clone, Copy)]
pub struct Profile {
    pub speed: f64,
    pub kappa: [f64; 4],
    pub tau: [f64; 4],
}

fn wave(p: &[f64; 4], t: f64) -> f64 {
    p[0] + p[1] * (TAU * p[2] * t + p[3]).sin()
}

impl Profile {
    pub fn random(rng: &mut impl Rng) -> Self {
        let mut coeffs = |lo: f64, hi: f64| {
            let a = rng.gen_range(lo..hi);
            [
                a,
                rng.gen_range(0.0..0.5) * a,
                f64::from(rng.gen_range(1..=3)),
                rng.gen_range(0.0..TAU),
            ]
        };
        let kappa = coeffs(0.5, 2.0);
        let tau = coeffs(0.5, 2.0);
        Profile {
            speed: rng.gen_range(2.0..6.0),
            kappa,
            tau,
        }
    }

    pub fn kappa(&self, t: f64) -> f64 {
        wave(&self.kappa, t)
    }

    pub fn tau(&self, t: f64) -> f64 {
        wave(&self.tau, t)
    }

    pub fn lambda(&self, t: f64) -> Matrix4<f64> {
        let s = self.speed;
        jacobi_matrix(&[s, s * self.kappa(t), s * self.tau(t)])
    }

    pub fn integrate(&self, steps: usize) -> JacobianCurve<4> {
        let p = *self;
        integrate_jacobian(move |t| p.lambda(t), steps).expect("positive profile")
    }
}
