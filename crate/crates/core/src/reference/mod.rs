//! Domains with known geodesics, used to cross-check the generic engine.

pub mod so3;
pub mod spd;

pub use so3::{
    so3_distance, so3_exp, so3_geodesic, so3_log, so3_power, so3_translate, so3_translate_inv,
    RotationPoint,
};
pub use spd::{
    spd_distance, spd_geodesic, spd_log_norm, spd_power, spd_translate, spd_translate_inv, SpdPoint,
};
