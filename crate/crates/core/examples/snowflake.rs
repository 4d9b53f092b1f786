//! Depth-two trees: closed-form recovery next to the general search.

use qtree::charpoly::{psi, psi_hat};
use qtree::format::to_json_string;
use qtree::inverse::{recover_shape, recover_snowflake};
use qtree::inverse::snowflake::snowflake;

fn main() -> qtree::error::Result<()> {
    let t = snowflake(&[3, 3, 4]);
    let (a, b) = (psi(&t), psi_hat(&t)?);
    println!("psi = {a}\npsi_hat = {b}");
    let direct = recover_snowflake(&a, &b).expect("depth two");
    println!("direct: {}", direct.canonical_code());
    let res = recover_shape(&a, &b)?;
    println!("{}", to_json_string(&res.to_json_value()));
    Ok(())
}
