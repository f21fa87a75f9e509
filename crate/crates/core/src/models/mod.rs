//! Concrete statistical models.

mod examples;
mod expfam;
mod ou;

pub use examples::{
    binomial_expansions, binomial_limit_alpha, binomial_phase_transition, exponential_closed_forms,
    exponential_theta_p, BinomialExpansions, ExponentialClosedForms,
};
pub use expfam::{
    expfam_limit_alpha, expfam_score, expfam_score_model, fisher_info, natural_scale_expansion,
    natural_scale_expansion_direct, ExpFamilyModel, ExpFamilyScore, SampleSummary,
};
pub use ou::{
    ou_estimate, ou_eta_model, ou_phi, ou_psi, ou_simulate, ou_simulate_stream, ou_theta_model, OUEstimate, OUSpec,
    OuEtaScore, OuThetaScore,
};
