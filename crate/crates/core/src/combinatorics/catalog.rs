use super::{parity_oa, Design, OrthogonalArray, ResolvableDesign};
use crate::error::{Error, Result};

/// Names accepted by [`catalog_design`].
pub const CATALOG_DESIGNS: [&str; 4] = ["fano-7-3-1", "affine-9-3-1", "biplane-7-4-2", "gdd-dual-example"];

/// Built-in designs with their printed block order.
///
/// `gdd-dual-example` is the 2-(3,2,3,1) GDD on six points, flattened with
/// `(u,v) ↦ (u−1)·2 + v`; it is not a t-design and carries no tag.
type Entry<'a> = (u32, &'a [&'a [u32]], Option<(u32, u32)>);

pub fn catalog_design(name: &str) -> Result<Design> {
    let (points, blocks, tag): Entry = match name {
        "fano-7-3-1" => (
            7,
            &[&[1, 2, 4], &[2, 3, 5], &[3, 4, 6], &[4, 5, 7], &[5, 6, 1], &[6, 7, 2], &[7, 1, 3]],
            Some((2, 1)),
        ),
        "affine-9-3-1" => (
            9,
            &[
                &[1, 4, 7],
                &[2, 5, 8],
                &[3, 6, 9],
                &[1, 2, 3],
                &[4, 5, 6],
                &[7, 8, 9],
                &[1, 6, 8],
                &[2, 4, 9],
                &[3, 5, 7],
                &[1, 5, 9],
                &[2, 6, 7],
                &[3, 4, 8],
            ],
            Some((2, 1)),
        ),
        "biplane-7-4-2" => (
            7,
            &[
                &[1, 2, 3, 5],
                &[2, 3, 4, 6],
                &[3, 4, 5, 7],
                &[4, 5, 6, 1],
                &[5, 6, 7, 2],
                &[6, 7, 1, 3],
                &[7, 1, 2, 4],
            ],
            Some((2, 2)),
        ),
        "gdd-dual-example" => (6, &[&[1, 3, 5], &[2, 3, 6], &[1, 4, 6], &[2, 4, 5]], None),
        _ => return Err(Error::NotFound(format!("no catalog design named {name:?}"))),
    };
    let d = Design::new(points, blocks.iter().map(|b| b.to_vec()).collect())?;
    Ok(match tag {
        Some((t, lambda)) => d.with_tag(t, lambda),
        None => d,
    })
}

/// Built-in resolvable designs.
pub fn catalog_resolvable(name: &str) -> Result<ResolvableDesign> {
    match name {
        "example-4-2-6-3-1" => ResolvableDesign::new(
            4,
            vec![
                vec![vec![1, 3], vec![2, 4]],
                vec![vec![1, 2], vec![3, 4]],
                vec![vec![1, 4], vec![2, 3]],
            ],
        ),
        _ => Err(Error::NotFound(format!("no catalog resolvable design named {name:?}"))),
    }
}

/// Built-in orthogonal arrays. `example-3-2-2` is the four-row array
/// `111, 212, 122, 221`.
pub fn catalog_oa(name: &str) -> Result<OrthogonalArray> {
    match name {
        "example-3-2-2" => parity_oa(3, 2),
        _ => Err(Error::NotFound(format!("no catalog OA named {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{check_divisibility, verify_t_design};

    #[test]
    fn catalog_designs_verify() {
        for name in CATALOG_DESIGNS {
            let d = catalog_design(name).unwrap();
            if let Some(tag) = d.tag() {
                let r = verify_t_design(&d, tag.t, tag.lambda);
                assert!(r.passed, "{name}");
                assert!(check_divisibility(tag.t, d.block_size(), tag.lambda, d.num_points()));
                let r = r.replication.unwrap();
                assert_eq!(d.num_blocks() * d.block_size() as usize, r * d.num_points() as usize);
            }
        }
    }

    #[test]
    fn fano_matches_printed_list() {
        let d = catalog_design("fano-7-3-1").unwrap();
        assert_eq!(d.block(4), [1, 5, 6]);
        let r = verify_t_design(&d, 2, 1);
        assert_eq!(r.replication, Some(3));
        let bad = verify_t_design(&d, 2, 2);
        assert_eq!(bad.first_violation, Some((vec![1, 2], 1)));
        assert!(catalog_design("nope").is_err());
    }
}
