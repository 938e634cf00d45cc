//! Point/block duality between resolvable designs, GDDs and orthogonal arrays.

use super::{GroupDivisibleDesign, OrthogonalArray, Point, ResolvableDesign};
use crate::error::{Error, Result};

/// The dual GDD: groups are the parallel classes, and original point `j`
/// becomes block `j`, containing `(u,v)` iff `j ∈ A_{u,v}`.
pub fn dual_of_resolvable(rd: &ResolvableDesign) -> Result<GroupDivisibleDesign> {
    let m = rd.num_classes();
    let q = rd.blocks_per_class();
    let mut blocks = Vec::with_capacity(rd.num_points() as usize);
    for j in 1..=rd.num_points() {
        let mut block = Vec::with_capacity(m as usize);
        for u in 1..=m {
            let v = (1..=q)
                .find(|&v| rd.block(u, v).contains(&j))
                .ok_or_else(|| Error::InvalidInput(format!("point {j} missing from class {u}")))?;
            block.push(Point::new(u, v));
        }
        blocks.push(block);
    }
    GroupDivisibleDesign::new(m, q, blocks)
}

/// Inverse of [`dual_of_resolvable`]: blocks of a GDD with `L = m` become the
/// points, and `A_{u,v}` collects the blocks through `(u,v)`.
pub fn gdd_to_resolvable(gdd: &GroupDivisibleDesign) -> Result<ResolvableDesign> {
    let (m, q) = (gdd.num_groups(), gdd.group_size());
    if gdd.block_size() != m {
        return Err(Error::InvalidInput(format!(
            "blocks of size {} do not meet all {m} groups",
            gdd.block_size()
        )));
    }
    let classes = (1..=m)
        .map(|u| {
            (1..=q)
                .map(|v| {
                    gdd.blocks()
                        .iter()
                        .enumerate()
                        .filter(|(_, b)| b[u as usize - 1].value == v)
                        .map(|(j, _)| j as u32 + 1)
                        .collect()
                })
                .collect()
        })
        .collect();
    ResolvableDesign::new(gdd.num_blocks() as u32, classes)
        .map_err(|e| Error::InvalidInput(format!("dual is not resolvable: {e}")))
}

/// `A(j,u) = v` iff `j ∈ A_{u,v}`; the result is an `OA_{λ_t}(m, q, t)`.
pub fn resolvable_to_oa(rd: &ResolvableDesign, t: u32) -> Result<OrthogonalArray> {
    let lambda = rd
        .cross_index(t)
        .filter(|&l| l > 0)
        .ok_or_else(|| Error::InvalidInput(format!("design is not {t}-cross")))?;
    let gdd = dual_of_resolvable(rd)?;
    let rows = gdd.blocks().iter().map(|b| b.iter().map(|p| p.value).collect()).collect();
    OrthogonalArray::new(rows, rd.blocks_per_class(), t, lambda as u32)
}

/// `A_{u,v} = {j : A(j,u) = v}`, with the rows of the array as points.
pub fn oa_to_resolvable(oa: &OrthogonalArray) -> Result<ResolvableDesign> {
    let q = oa.alphabet();
    let classes = (1..=oa.num_columns())
        .map(|u| {
            (1..=q)
                .map(|v| {
                    (1..=oa.num_rows())
                        .filter(|&j| oa.get(j, u as usize) == v)
                        .map(|j| j as u32)
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    if classes.iter().flatten().any(|b| b.len() * q as usize != oa.num_rows()) {
        return Err(Error::InvalidInput("symbols are not balanced in every column".into()));
    }
    ResolvableDesign::new(oa.num_rows() as u32, classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{catalog_oa, catalog_resolvable, trivial_oa, verify_gdd, verify_oa};

    #[test]
    fn small_example_round_trips() {
        let rd = catalog_resolvable("example-4-2-6-3-1").unwrap();
        let gdd = dual_of_resolvable(&rd).unwrap();
        let p = Point::new;
        assert_eq!(
            gdd.blocks(),
            [
                vec![p(1, 1), p(2, 1), p(3, 1)],
                vec![p(1, 2), p(2, 1), p(3, 2)],
                vec![p(1, 1), p(2, 2), p(3, 2)],
                vec![p(1, 2), p(2, 2), p(3, 1)],
            ]
        );
        assert!(verify_gdd(&gdd, 2, 1).passed);
        assert_eq!(gdd_to_resolvable(&gdd).unwrap(), rd);

        let oa = resolvable_to_oa(&rd, 2).unwrap();
        assert_eq!(oa, catalog_oa("example-3-2-2").unwrap());
        assert!(verify_oa(&oa, 2, 1).passed);
        assert_eq!(oa_to_resolvable(&oa).unwrap(), rd);
    }

    #[test]
    fn degenerate_cases() {
        let single = ResolvableDesign::new(3, vec![vec![vec![1], vec![2], vec![3]]]).unwrap();
        let g = dual_of_resolvable(&single).unwrap();
        assert_eq!(g.num_groups(), 1);
        let oa = resolvable_to_oa(&single, 1).unwrap();
        assert_eq!(oa.num_columns(), 1);

        let rd = oa_to_resolvable(&trivial_oa(2, 2).unwrap()).unwrap();
        assert_eq!(rd.num_classes(), 2);
        assert_eq!(rd.num_points(), 4);
    }

    #[test]
    fn non_cross_design_is_rejected() {
        let rd = catalog_resolvable("example-4-2-6-3-1").unwrap();
        assert!(resolvable_to_oa(&rd, 3).is_err());
    }
}
