//! The dual modules `Q*_W` and `Q*_{W/W_Xi}` with their Bott-Samelson
//! classes, push-pull and push-forward operators, image and invariance
//! criteria, characteristic map and push-forward pairing.

mod borel;
mod classes;
mod elem;
mod pairing;
mod parabolic;

pub(crate) use classes::canonical_bs_basis;
pub use borel::{borel_surjectivity_check, BorelReport};
pub use classes::{
    bott_samelson, char_map, leading_roots, membership_image, operator_a, operator_a_word,
    to_bs_basis, BsSolve, Membership,
};
pub use elem::{bullet_act, DualElem, Model};
pub use pairing::{determinant, pairing, pairing_matrix, PairingReport};
pub use parabolic::{
    euler_class, invariance_witness, is_invariant, operator_a_parabolic, parabolic_class,
    parabolic_project, parabolic_push, parabolic_push_direct, parabolic_sum, pushpull_parabolic_with,
    random_representatives, representative_cross_check, section, EulerCheck,
};
