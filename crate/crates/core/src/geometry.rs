//! Planar geometry: Poisson point processes on a disk, hexagonal clusters
//! with their ring partition, and sampled network realizations.
//!
//! Hexagons are flat-topped: the three edge-normal axes point at angles
//! 0, 60 and 120 degrees, so two edges are vertical and two vertices lie on
//! the vertical axis through the center. Membership, edge distance and ring
//! indexing all reduce to the hexagonal gauge `max_k |<p - c, n_k>|` over the
//! three axes, which for a point inside equals apothem minus the distance to
//! the nearest edge.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::channel::sample_serving_distance;
use crate::error::{ensure, Error, Result};

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Squared Euclidean distance to `other`.
    pub fn dist_sq(&self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: Point2) -> f64 {
        self.dist_sq(other).sqrt()
    }
}

/// A finite point pattern drawn on a disk centered at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub points: Vec<Point2>,
    /// Density of the process that generated the pattern, per unit area.
    pub generating_density: f64,
    /// Radius of the generating disk.
    pub region_radius: f64,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Draws a homogeneous Poisson point process of the given density on the disk
/// of radius `region_radius` centered at the origin.
///
/// The count is Poisson with mean `density * pi * region_radius^2` and the
/// points are independent uniforms on the disk. A zero density yields an
/// empty pattern; negative density or radius is rejected.
pub fn sample_ppp<R: Rng + ?Sized>(
    density: f64,
    region_radius: f64,
    rng: &mut R,
) -> Result<PointSet> {
    ensure!(
        density >= 0.0 && density.is_finite(),
        "ppp density must be finite and non-negative, got {density}"
    );
    ensure!(
        region_radius >= 0.0 && region_radius.is_finite(),
        "ppp region radius must be finite and non-negative, got {region_radius}"
    );
    let mean = density * std::f64::consts::PI * region_radius * region_radius;
    let count = if mean > 0.0 {
        let pois = Poisson::new(mean)
            .map_err(|e| Error::invalid(format!("poisson mean {mean}: {e}")))?;
        pois.sample(rng) as u64
    } else {
        0
    };
    let mut points = Vec::with_capacity(count as usize);
    for _ in 0..count {
        points.push(sample_uniform_in_disk(region_radius, rng));
    }
    Ok(PointSet {
        points,
        generating_density: density,
        region_radius,
    })
}

/// Uniform point on the disk of radius `radius` centered at the origin, via
/// rejection from the bounding square (exact, no transcendentals).
fn sample_uniform_in_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point2 {
    loop {
        let x = 2.0 * rng.gen::<f64>() - 1.0;
        let y = 2.0 * rng.gen::<f64>() - 1.0;
        if x * x + y * y <= 1.0 {
            return Point2::new(x * radius, y * radius);
        }
    }
}

/// A flat-topped regular hexagon, `C(center, apothem)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hexagon {
    center: Point2,
    apothem: f64,
}

/// Unit edge-normal axes at 0, 60 and 120 degrees. The six edge normals are
/// these axes and their negations.
const HEX_AXES: [(f64, f64); 3] = [(1.0, 0.0), (0.5, SQRT_3 / 2.0), (-0.5, SQRT_3 / 2.0)];

impl Hexagon {
    pub fn new(center: Point2, apothem: f64) -> Result<Self> {
        ensure!(
            apothem > 0.0 && apothem.is_finite(),
            "hexagon apothem must be finite and positive, got {apothem}"
        );
        Ok(Hexagon { center, apothem })
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    /// Distance from the center to each edge midpoint.
    pub fn apothem(&self) -> f64 {
        self.apothem
    }

    /// Distance from the center to each vertex: `2/sqrt(3)` times the apothem.
    pub fn circumradius(&self) -> f64 {
        self.apothem * 2.0 / SQRT_3
    }

    /// Area `2 sqrt(3) apothem^2`.
    pub fn area(&self) -> f64 {
        2.0 * SQRT_3 * self.apothem * self.apothem
    }

    /// Hexagonal gauge of `p`: the largest absolute projection of `p - center`
    /// onto the three edge-normal axes. At most the Euclidean distance, with
    /// equality along the edge normals; `gauge(p) <= apothem` iff `p` lies in
    /// the closed hexagon.
    pub fn gauge(&self, p: Point2) -> f64 {
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        let mut g: f64 = 0.0;
        for (cx, cy) in HEX_AXES {
            g = g.max((dx * cx + dy * cy).abs());
        }
        g
    }

    /// Closed membership test (boundary points are inside).
    pub fn contains(&self, p: Point2) -> bool {
        self.gauge(p) <= self.apothem
    }

    /// Distance from an interior point to the hexagon boundary, i.e. apothem
    /// minus the largest projection onto the six edge normals, which equals
    /// apothem minus the gauge.
    ///
    /// Points outside the hexagon are rejected.
    pub fn edge_distance(&self, p: Point2) -> Result<f64> {
        let g = self.gauge(p);
        ensure!(
            g <= self.apothem,
            "edge_distance requires a point inside the hexagon (gauge {g} > apothem {})",
            self.apothem
        );
        Ok(self.apothem - g)
    }

    /// Index of the concentric hexagonal ring containing `p`, or `None` for
    /// points in the closed core hexagon. Ring `n >= 1` is the half-open
    /// shell `C(sqrt(n+1) apothem) \ C(sqrt(n) apothem)`, so the rings tile
    /// the exterior and each ring has the same area as the core.
    pub fn ring_index(&self, p: Point2) -> Option<u32> {
        let g = self.gauge(p);
        if g <= self.apothem {
            return None;
        }
        let q = (g / self.apothem) * (g / self.apothem);
        let mut n = (q.ceil() as i64 - 1).max(1) as u32;
        // The closed-form index can land one ring off when g/apothem sits on
        // a sqrt(n) boundary; settle it with the defining comparisons.
        while n > 1 && g <= (n as f64).sqrt() * self.apothem {
            n -= 1;
        }
        while g > ((n + 1) as f64).sqrt() * self.apothem {
            n += 1;
        }
        Some(n)
    }

    /// Uniform point in the hexagon, by rejection from the bounding box.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        let rho = self.apothem;
        let circ = self.circumradius();
        loop {
            let p = Point2::new(
                self.center.x + rho * (2.0 * rng.gen::<f64>() - 1.0),
                self.center.y + circ * (2.0 * rng.gen::<f64>() - 1.0),
            );
            if self.contains(p) {
                return p;
            }
        }
    }
}

/// Whether `p` lies in ring `n >= 1` of the hexagon `C(center, apothem)`.
pub fn hex_ring_contains(center: Point2, apothem: f64, n: u32, p: Point2) -> Result<bool> {
    ensure!(n >= 1, "ring index must be at least 1, got {n}");
    let hex = Hexagon::new(center, apothem)?;
    let g = hex.gauge(p);
    Ok(g > (n as f64).sqrt() * apothem && g <= ((n + 1) as f64).sqrt() * apothem)
}

/// Mean number of process points in a hexagon of the given apothem:
/// `2 sqrt(3) apothem^2 density`.
pub fn expected_cluster_size(density: f64, apothem: f64) -> Result<f64> {
    ensure!(
        density >= 0.0 && density.is_finite(),
        "density must be finite and non-negative, got {density}"
    );
    ensure!(
        apothem > 0.0 && apothem.is_finite(),
        "apothem must be finite and positive, got {apothem}"
    );
    Ok(2.0 * SQRT_3 * apothem * apothem * density)
}

/// Apothem of the hexagon whose mean occupancy equals `cluster_size` at the
/// given density. Inverse of [`expected_cluster_size`].
pub fn apothem_for_cluster_size(density: f64, cluster_size: f64) -> Result<f64> {
    ensure!(
        density > 0.0 && density.is_finite(),
        "density must be finite and positive, got {density}"
    );
    ensure!(
        cluster_size > 0.0 && cluster_size.is_finite(),
        "cluster size must be finite and positive, got {cluster_size}"
    );
    Ok((cluster_size / (2.0 * SQRT_3 * density)).sqrt())
}

/// Which conditioning to apply when drawing a network realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Mobile and serving base station collocated at the cluster center;
    /// every process point outside the hexagon interferes.
    ClusterCenter,
    /// Serving base station uniform in the cluster, mobile at the sampled
    /// serving distance in a uniform direction; points interfere when they
    /// are outside the hexagon and farther from the mobile than the server.
    Typical,
    /// No cooperation: only the nearest-server guard zone protects the
    /// mobile, the cluster plays no role in interference.
    NoMcc,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Scenario::ClusterCenter => "cluster-center",
            Scenario::Typical => "typical",
            Scenario::NoMcc => "no-mcc",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cluster-center" => Ok(Scenario::ClusterCenter),
            "typical" => Ok(Scenario::Typical),
            "no-mcc" => Ok(Scenario::NoMcc),
            other => Err(Error::invalid(format!(
                "unknown scenario '{other}' (expected cluster-center, typical, or no-mcc)"
            ))),
        }
    }
}

/// One sampled network: the interfering points plus the tagged link.
#[derive(Debug, Clone)]
pub struct NetworkRealization {
    /// Interfering base stations after scenario conditioning.
    pub interferers: PointSet,
    /// Serving base station of the tagged mobile.
    pub typical_bs: Point2,
    /// The tagged mobile.
    pub typical_mobile: Point2,
    /// Distance from the mobile to its serving base station.
    pub serving_distance: f64,
    /// Distance from the serving base station to the cluster boundary.
    pub edge_distance: f64,
    /// The cooperation cluster.
    pub cluster: Hexagon,
}

/// Draws one network realization: a Poisson pattern on the disk, the tagged
/// link per the scenario, and the interferer set after conditioning.
///
/// The cluster is centered at the origin (the disk center). Under
/// [`Scenario::ClusterCenter`] the serving distance is zero and the edge
/// distance equals the apothem; under the other scenarios the serving base
/// station is uniform in the cluster and the mobile sits at the sampled
/// serving distance from it in a uniform direction.
pub fn sample_realization<R: Rng + ?Sized>(
    density: f64,
    disk_radius: f64,
    apothem: f64,
    scenario: Scenario,
    rng: &mut R,
) -> Result<NetworkRealization> {
    ensure!(
        density > 0.0 && density.is_finite(),
        "realization density must be finite and positive, got {density}"
    );
    ensure!(
        disk_radius > 0.0 && disk_radius.is_finite(),
        "disk radius must be finite and positive, got {disk_radius}"
    );
    let cluster = Hexagon::new(Point2::ORIGIN, apothem)?;
    let pattern = sample_ppp(density, disk_radius, rng)?;

    let (typical_bs, typical_mobile, serving_distance) = match scenario {
        Scenario::ClusterCenter => (Point2::ORIGIN, Point2::ORIGIN, 0.0),
        Scenario::Typical | Scenario::NoMcc => {
            let bs = cluster.sample_uniform(rng);
            let l = sample_serving_distance(density, rng)?;
            let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            let mobile = Point2::new(bs.x + l * phi.cos(), bs.y + l * phi.sin());
            (bs, mobile, l)
        }
    };
    let edge_distance = cluster.edge_distance(typical_bs)?;

    let l_sq = serving_distance * serving_distance;
    let keep = |p: &Point2| match scenario {
        Scenario::ClusterCenter => !cluster.contains(*p),
        Scenario::Typical => !cluster.contains(*p) && p.dist_sq(typical_mobile) > l_sq,
        Scenario::NoMcc => p.dist_sq(typical_mobile) > l_sq,
    };
    let points: Vec<Point2> = pattern.points.into_iter().filter(|p| keep(p)).collect();

    Ok(NetworkRealization {
        interferers: PointSet {
            points,
            generating_density: density,
            region_radius: disk_radius,
        },
        typical_bs,
        typical_mobile,
        serving_distance,
        edge_distance,
        cluster,
    })
}
