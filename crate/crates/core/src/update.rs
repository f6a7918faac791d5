use crate::label::Label;

/// One element of a graph update stream, in external vertex ids.
///
/// Edge labels are already resolved: streams without edge labels carry
/// [`Label::UNLABELED`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateOp {
    InsertEdge { src: u64, dst: u64, label: Label },
    DeleteEdge { src: u64, dst: u64 },
    InsertVertex { id: u64, label: Label },
    DeleteVertex { id: u64 },
}

impl UpdateOp {
    pub fn is_insertion(&self) -> bool {
        matches!(self, UpdateOp::InsertEdge { .. } | UpdateOp::InsertVertex { .. })
    }

    /// The operation that undoes this one on an edge, if it is an edge op.
    pub fn inverse_edge(&self, label: Label) -> Option<UpdateOp> {
        match *self {
            UpdateOp::InsertEdge { src, dst, .. } => Some(UpdateOp::DeleteEdge { src, dst }),
            UpdateOp::DeleteEdge { src, dst } => Some(UpdateOp::InsertEdge { src, dst, label }),
            _ => None,
        }
    }
}
