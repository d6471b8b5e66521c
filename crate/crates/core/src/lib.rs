// SPDX-License-Identifier: Apache-2.0

//! Scrambling diagnostics for two NV spins coupled through a mechanical
//! channel.
//!
//! Two routes are modelled:
//!
//! * [`hybrid`]: two coupled, possibly driven, damped and Duffing-nonlinear
//!   classical oscillators, each carrying one spin, with mean-field feedback
//!   of ⟨Ŝᶻ⟩ onto the oscillators;
//! * [`channel`]: a quantum oscillator eliminated into an effective flip-flop
//!   interaction between the spins, treated exactly at fixed photon number.
//!
//! [`correlators`] evaluates out-of-time-ordered and two-point correlators
//! for either route, and [`runner`] wraps everything in named scenarios with
//! CSV/JSON output.

// range checks are written as !(x >= lo) so NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod correlators;
pub mod error;
pub mod hybrid;
pub mod ode;
pub mod runner;
pub mod spin_algebra;

pub use error::{Error, Result};
