//! Low-frequency stabilized formulations for resistive-capacitive circuits and
//! electroquasistatic finite-element models.

pub mod blocks;
pub mod circuit;
pub mod fem;
pub mod numkit;
pub mod stabilize;
pub mod timestep;
