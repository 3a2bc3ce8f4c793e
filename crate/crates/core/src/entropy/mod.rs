//! Upper bounds: the entropy LP, gadget covers, and partition certificates.

pub mod gadget;
pub mod info_lp;
pub mod partition;

pub use gadget::{make_gadget, trivial_gadget, verify_gadget_cover, CoverSpec, Gadget, GadgetCover};
pub use info_lp::{info_lp_bound, partial_info_lp_bound, InfoLpError, LpMode};
pub use partition::{chorded_cycle_certificate, find_partition, verify_partition, PartitionCertificate, PartitionError};
