//! Similarity-threshold generalisation of level-0 object sets.

mod dendrogram;
mod merge;
mod similarity;

pub use dendrogram::{sweep_partitions, sweep_tsv, DendroNode, Dendrogram};
pub use merge::{generalise, MergeRecord};
pub use similarity::{cluster_partition, similarity, similarity_matrix, Partition, SimilarityMatrix};

/// Single-linkage merge tree of the matrix.
pub fn dendrogram(matrix: &SimilarityMatrix) -> Dendrogram {
    Dendrogram::build(matrix)
}
