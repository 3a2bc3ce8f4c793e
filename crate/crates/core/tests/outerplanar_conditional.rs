//! Conditional check on a reconstructed outerplanar graph whose capacity is
//! claimed to be 14/3 with a three-colour gadget cover. The edge set in
//! `data/outerplanar9.edges` is inferred from the cover's description, so a
//! pass confirms the value for this reconstruction only.

use scap_core::clique_packing::fcc;
use scap_core::entropy::gadget::CoverSpec;
use scap_core::entropy::{info_lp_bound, verify_gadget_cover, LpMode};
use scap_core::graph::io::parse_edge_list;
use scap_core::rational::rat;

const EDGES: &str = include_str!("../data/outerplanar9.edges");
const COVER: &str = include_str!("../data/outerplanar9_cover.json");

#[test]
fn reconstructed_outerplanar_capacity_is_fourteen_thirds() {
    let g = parse_edge_list(EDGES).unwrap();
    assert_eq!((g.n(), g.m()), (9, 11));
    // Outerplanar: at most 2n - 3 edges.
    assert!(g.m() <= 2 * g.n() - 3);
    let spec: CoverSpec = serde_json::from_str(COVER).unwrap();
    let cert = verify_gadget_cover(&g, &spec.build(&g).unwrap()).unwrap();
    assert_eq!((cert.k, cert.total_weight), (3, 14));
    assert_eq!(cert.bound, rat(14, 3));
    assert_eq!(fcc(&g).unwrap().value, rat(14, 3));
    assert_eq!(info_lp_bound(&g, &LpMode::Full).unwrap(), rat(14, 3));
}
