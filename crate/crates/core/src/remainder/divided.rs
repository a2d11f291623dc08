use crate::error::{Error, Result};
use crate::numkernel::C64;

fn coincide(a: C64, b: C64) -> bool {
    (a - b).norm() <= 4.0 * f64::EPSILON * a.norm().max(b.norm())
}

/// `f[x_1, ..., x_m]` by the recursive definition over distinct nodes.
pub fn divided_difference<F: Fn(C64) -> C64>(f: F, nodes: &[C64]) -> Result<C64> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("divided difference needs at least one node".into()));
    }
    for (i, &a) in nodes.iter().enumerate() {
        if nodes[..i].iter().any(|&b| coincide(a, b)) {
            return Err(Error::RepeatedNode { node: a });
        }
    }
    let mut table: Vec<C64> = nodes.iter().map(|&x| f(x)).collect();
    for order in 1..nodes.len() {
        for i in 0..nodes.len() - order {
            table[i] = (table[i + 1] - table[i]) / (nodes[i + order] - nodes[i]);
        }
    }
    Ok(table[0])
}

/// Divided difference of the resolvent `1/(z - x)` over `nodes`: `1 / prod (z - x_i)`.
/// Valid for repeated nodes as well.
pub fn resolvent_divided_difference(z: C64, nodes: &[C64]) -> C64 {
    nodes.iter().fold(C64::from(1.0), |acc, &x| acc / (z - x))
}

/// Divided difference of `prod (x - t_j) / (z - x)` over `nodes`:
/// `prod (z - t_j) / prod (z - x_i)`, provided the numerator degree is below the
/// number of nodes. Valid for repeated nodes as well.
pub fn weighted_resolvent_divided_difference(z: C64, numerator_roots: &[C64], nodes: &[C64]) -> Result<C64> {
    if numerator_roots.len() >= nodes.len() {
        return Err(Error::InvalidArgument(format!(
            "numerator degree {} must be below the node count {}",
            numerator_roots.len(),
            nodes.len()
        )));
    }
    let num = numerator_roots.iter().fold(C64::from(1.0), |acc, &t| acc * (z - t));
    Ok(num * resolvent_divided_difference(z, nodes))
}
