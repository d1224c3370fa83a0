use annvv_kernel::KernelError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("relation '{0}' is not homogeneous for any positive weights")]
    InhomogeneousRelation(String),
    #[error("ideal {0} is not m-primary")]
    NotMPrimary(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no superficial element found after {attempts} attempts at step {step}")]
    Sampling {
        step: usize,
        attempts: usize,
        failures: Vec<String>,
    },
    #[error("vanishing window not reached by degree {cap} (seed {seed})")]
    Unstabilized { cap: u32, seed: u64 },
    #[error("depth oracles disagree: vv gives {vv}, resolution gives {resolution}; resample with another seed to rule out a non-generic sequence")]
    DepthMismatch { vv: usize, resolution: usize },
}

pub type Result<T> = std::result::Result<T, CoreError>;
