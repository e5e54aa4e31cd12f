"""SegalKit: finite simplicial structures and the axioms of a homotopy theory of categories."""
