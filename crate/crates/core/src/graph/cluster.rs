//! Named cluster shapes used to plant signals in experiments.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{cut_size, is_connected_subset, Graph, VertexSet};
use crate::error::{Error, Result};

/// Shape of a planted cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterShape {
    /// `len` consecutive ids. With `align = Some(a)` the start is a random
    /// positive multiple of `a`; otherwise the interval avoids both ends of
    /// the id range so that on a path it has cut size 2.
    Interval { len: usize, align: Option<usize> },
    /// `width` columns by `height` rows on a torus, wrapping at the edges.
    Rectangle { width: usize, height: usize },
    /// Connected set grown from a random vertex by repeatedly absorbing a
    /// uniformly chosen frontier vertex.
    Ball { size: usize },
}

/// A sampled cluster together with its cut size in the host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledCluster {
    pub vertices: VertexSet,
    pub cut_size: usize,
}

impl ClusterShape {
    pub fn size(&self) -> usize {
        match *self {
            ClusterShape::Interval { len, .. } => len,
            ClusterShape::Rectangle { width, height } => width * height,
            ClusterShape::Ball { size } => size,
        }
    }
}

impl fmt::Display for ClusterShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClusterShape::Interval { len, align: None } => write!(f, "interval:{len}"),
            ClusterShape::Interval {
                len,
                align: Some(a),
            } => write!(f, "interval:{len}@{a}"),
            ClusterShape::Rectangle { width, height } => write!(f, "rect:{width}x{height}"),
            ClusterShape::Ball { size } => write!(f, "ball:{size}"),
        }
    }
}

impl FromStr for ClusterShape {
    type Err = Error;

    /// Accepts `interval:K`, `interval:K@A`, `rect:WxH` and `ball:K`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad cluster spec `{s}`"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match kind.trim() {
            "interval" => match arg.split_once('@') {
                Some((len, a)) => Ok(ClusterShape::Interval {
                    len: num(len)?,
                    align: Some(num(a)?).filter(|&a| a > 0).map(Some).ok_or_else(bad)?,
                }),
                None => Ok(ClusterShape::Interval {
                    len: num(arg)?,
                    align: None,
                }),
            },
            "rect" => {
                let (w, h) = arg.split_once('x').ok_or_else(bad)?;
                Ok(ClusterShape::Rectangle {
                    width: num(w)?,
                    height: num(h)?,
                })
            }
            "ball" => Ok(ClusterShape::Ball { size: num(arg)? }),
            _ => Err(bad()),
        }
    }
}

/// Draws a connected cluster of the requested shape.
pub fn sample_cluster<R: Rng + ?Sized>(
    g: &Graph,
    shape: &ClusterShape,
    rng: &mut R,
) -> Result<SampledCluster> {
    let n = g.n();
    let k = shape.size();
    if k == 0 || k > n {
        return Err(Error::Sampling(format!(
            "cluster size {k} infeasible on {n} vertices"
        )));
    }
    let vertices = match *shape {
        ClusterShape::Interval { len, align } => {
            let start = match align {
                _ if len == n => 0,
                None if n - len >= 2 => rng.random_range(1..n - len),
                None => rng.random_range(0..=n - len),
                Some(a) => {
                    let starts: Vec<usize> = (1..)
                        .map(|i| i * a)
                        .take_while(|&s| s + len < n)
                        .collect();
                    if starts.is_empty() {
                        return Err(Error::Sampling(format!(
                            "no interior start aligned to {a} for length {len} on {n} vertices"
                        )));
                    }
                    starts[rng.random_range(0..starts.len())]
                }
            };
            VertexSet::range(start, start + len - 1)
        }
        ClusterShape::Rectangle { width, height } => {
            let (rows, cols) = g
                .grid_dims()
                .ok_or_else(|| Error::Sampling("rectangle clusters need a torus".into()))?;
            if width > cols || height > rows {
                return Err(Error::Sampling(format!(
                    "rectangle {width}x{height} does not fit torus {rows}x{cols}"
                )));
            }
            let r0 = rng.random_range(0..rows);
            let c0 = rng.random_range(0..cols);
            (0..height)
                .flat_map(|i| (0..width).map(move |j| ((r0 + i) % rows) * cols + (c0 + j) % cols))
                .collect()
        }
        ClusterShape::Ball { size } => grow_ball(g, size, rng)?,
    };
    if !is_connected_subset(g, &vertices)? {
        return Err(Error::Sampling(format!("{shape} is not connected in this graph")));
    }
    let cut_size = cut_size(g, &vertices)?;
    Ok(SampledCluster { vertices, cut_size })
}

fn grow_ball<R: Rng + ?Sized>(g: &Graph, size: usize, rng: &mut R) -> Result<VertexSet> {
    let n = g.n();
    let mut in_set = vec![false; n];
    let mut in_frontier = vec![false; n];
    let mut frontier = vec![rng.random_range(0..n)];
    in_frontier[frontier[0]] = true;
    let mut members = Vec::with_capacity(size);
    while members.len() < size {
        if frontier.is_empty() {
            return Err(Error::Sampling(format!(
                "component too small for a ball of size {size}"
            )));
        }
        let v = frontier.swap_remove(rng.random_range(0..frontier.len()));
        in_set[v] = true;
        members.push(v);
        for &w in g.neighbors(v) {
            if !in_set[w] && !in_frontier[w] {
                in_frontier[w] = true;
                frontier.push(w);
            }
        }
    }
    Ok(VertexSet::new(members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_path, build_torus};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn interval_on_path_has_cut_two() {
        let g = build_path(512).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let c = sample_cluster(&g, &ClusterShape::Interval { len: 50, align: None }, &mut rng).unwrap();
            assert_eq!(c.vertices.len(), 50);
            assert_eq!(c.cut_size, 2);
        }
    }

    #[test]
    fn aligned_interval_starts_on_multiples() {
        let g = build_path(512).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let c = sample_cluster(&g, &"interval:50@64".parse().unwrap(), &mut rng).unwrap();
            let start = c.vertices.first().unwrap();
            assert_eq!(start % 64, 0);
            assert!(start > 0);
            assert_eq!(c.cut_size, 2);
        }
    }

    #[test]
    fn rectangle_perimeter() {
        let g = build_torus(16, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = sample_cluster(&g, &ClusterShape::Rectangle { width: 4, height: 4 }, &mut rng).unwrap();
        assert_eq!(c.vertices.len(), 16);
        assert_eq!(c.cut_size, 16);
    }

    #[test]
    fn full_size_is_everything() {
        let g = build_torus(4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for shape in ["ball:16", "rect:4x4", "interval:16"] {
            let c = sample_cluster(&g, &shape.parse().unwrap(), &mut rng).unwrap();
            assert_eq!(c.vertices, VertexSet::full(16));
            assert_eq!(c.cut_size, 0);
        }
    }

    #[test]
    fn infeasible_requests() {
        let g = build_path(10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_cluster(&g, &ClusterShape::Ball { size: 11 }, &mut rng).is_err());
        assert!(sample_cluster(&g, &ClusterShape::Rectangle { width: 2, height: 2 }, &mut rng).is_err());
        assert!(sample_cluster(&g, &"interval:5@8".parse().unwrap(), &mut rng).is_err());
    }

    #[test]
    fn spec_round_trip() {
        for s in ["interval:10", "interval:50@64", "rect:3x2", "ball:7"] {
            assert_eq!(s.parse::<ClusterShape>().unwrap().to_string(), s);
        }
        assert!("blob:3".parse::<ClusterShape>().is_err());
        assert!("interval:3@0".parse::<ClusterShape>().is_err());
    }
}
