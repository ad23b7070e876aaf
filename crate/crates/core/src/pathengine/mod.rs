//! Admissible paths of P/M/I moves and their lift to isotopy certificates.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

mod certificate;
mod check;
mod lowpath;
mod minimal;
mod moves;
mod rank1;
mod rank2;
mod shared;

pub use certificate::{certificate, certificate_from_path, CertStep, Direction, IsotopyCertificate, StepKind};
pub use check::{check_certificate, check_path, CheckFailure, FailureClass};
pub use lowpath::{low_path, low_path_cancellable};
pub use minimal::make_minimal_primitive;
pub use moves::{apply_move, is_low_admissible, leq_perm, Move, MoveKind, MovePath};
pub use rank1::path_rank1;
pub use rank2::path_rank2_k2;
pub use shared::path_shared_primitive;

pub(crate) use moves::PathBuilder;

/// Cooperative cancellation flag for long constructions.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> CancelToken {
        CancelToken::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Copy, Default)]
pub(crate) struct Ctx<'a> {
    cancel: Option<&'a CancelToken>,
}

impl<'a> Ctx<'a> {
    pub fn new(cancel: Option<&'a CancelToken>) -> Ctx<'a> {
        Ctx { cancel }
    }

    pub fn check(&self) -> Result<()> {
        match self.cancel {
            Some(t) if t.is_cancelled() => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }
}
