//! Superficial sequences, Valabrega–Valla modules, associated graded rings
//! and local cohomology estimates for m-primary ideals of graded-local
//! rings `k[x]/J`.

pub mod blowup;
pub mod error;
pub mod lc_estimator;
pub mod local_model;
pub mod superficial;

pub use blowup::{
    assoc_graded_presentation, depth_assoc_graded, initial_form, is_g_regular_sequence,
    rees_presentation, DepthReport, DepthStrategy, GradedPresentation, InitialForm,
    ReesPresentation,
};
pub use error::{CoreError, Result};
pub use lc_estimator::{
    build_l_window, q_estimate, q_product_check, CohomologyPieceEstimate, LcConfig, LcContext,
    PieceStatus, QEstimate, QStatus,
};
pub use local_model::{
    build_ring, declare_ideal, declare_ideal_str, is_m_primary, LocalRing, LocalRingRef,
    MPrimaryIdeal, MPrimaryVerdict,
};
pub use superficial::{
    koszul_h1_check, sample_superficial_sequence, verify_superficial, vv_annihilator, vv_module,
    KoszulReport, LSeriesWindow, SuperficialConfig, SuperficialSequence, VvConfig,
    VvModuleReport, VvStatus,
};
