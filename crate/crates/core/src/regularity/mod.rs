//! Quadratic forms and their parametrized solutions, multiplicative Folner
//! windows, weighted averages and monochromatic-solution search.

mod folner;
mod forms;
mod search;
mod weights;

pub use folner::{folner_average, folner_box, folner_contains, folner_defect, mult_density, FolnerSpec};
pub use forms::{
    discriminants, pythagorean_parametrization, reduce_form, s_q_member, sqrt_in_ring, Discriminants, Pair,
    ParamSolution, PythagoreanParam, QuadraticForm,
};
pub use search::{monochromatic_search, Coloring, Found};
pub use weights::{a_delta_average, trapezoid, weight_average, weight_w_delta};
