//! Laplace mechanism, budget accounting and the seeded stream facility used
//! by every stochastic component.

pub mod laplace;
pub mod ledger;
pub mod rng;

pub use laplace::{laplace_inverse_cdf, laplace_log_density, laplace_sample};
pub use ledger::{
    budget_status, release_scalar, release_scalar_for, BudgetLedger, BudgetStatus, Mechanism,
    NoisyRelease, PrivacyParams,
};
pub use rng::RngStream;
