//! Disjoint point-index clusters, shared by the greedy-flow selection and
//! the grid-cube dynamic program.

/// Ordered family of disjoint clusters; members keep insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClusterFamily {
    pub clusters: Vec<Vec<usize>>,
}

impl ClusterFamily {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// One line per cluster: comma-separated member ids.
    pub fn trace(&self, ds: &crate::dataset::Dataset) -> String {
        let mut out = String::new();
        for members in &self.clusters {
            let ids: Vec<&str> = members.iter().map(|&i| ds.point(i).id.as_str()).collect();
            out.push_str(&ids.join(","));
            out.push('\n');
        }
        out
    }
}
