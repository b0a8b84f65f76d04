"""Quiver presentations of the descent algebras of the symmetric groups.

The descent algebra of S_n is realized as a quotient of the path algebra of
the quiver Q_n (partitions of n, edges merging two distinct parts) by the
ideal ker(Delta o iota), where iota sends paths to Polya classes of labeled
binary forests and Delta expands node labels into Lie brackets.
"""

__version__ = "0.1.0"
