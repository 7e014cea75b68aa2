"""Unrolled integral-affine charts of toric del Pezzo fan pictures.

The chart makes every unbounded edge vertical (m_out = (0,1)).  The bounded
cell sits below the horizontal slab through the origin-side singularity; each
singularity carries a focus-focus monodromy realised as an excised wedge
hanging into the bounded cell, and the two chart boundaries are glued by an
integral-affine shear (the seam).  All positions are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

Vec = tuple  # (Fraction, Fraction) points, (int, int) directions

F = Fraction


def kink(m1, m2) -> int:
    """det(m1 | m2), the lattice kink pairing of two integer vectors."""
    return m1[0] * m2[1] - m1[1] * m2[0]


def primitive(v):
    from math import gcd
    g = gcd(abs(v[0]), abs(v[1]))
    if g == 0:
        raise ValueError("zero vector has no primitive")
    return (v[0] // g, v[1] // g)


@dataclass(frozen=True)
class Monodromy:
    """2x2 integer matrix acting on tangent vectors/monomials."""

    matrix: tuple  # ((a,b),(c,d))

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if a * d - b * c != 1:
            raise ValueError("monodromy must have determinant 1")

    def apply(self, v):
        (a, b), (c, d) = self.matrix
        return (a * v[0] + b * v[1], c * v[0] + d * v[1])

    def __matmul__(self, other):
        (a, b), (c, d) = self.matrix
        (e, f_), (g, h) = other.matrix
        return Monodromy(((a * e + b * g, a * f_ + b * h),
                          (c * e + d * g, c * f_ + d * h)))

    def __eq__(self, other):
        return isinstance(other, Monodromy) and self.matrix == other.matrix


def verify_worm(t_delta, t_dprime, t_ddprime, t_d1, t_d2) -> bool:
    """Check both splittings T_d'' = T_d o T_d' = T_d2 o T_d1."""
    return (t_delta @ t_dprime == t_ddprime) and (t_d2 @ t_d1 == t_ddprime)


@dataclass(frozen=True)
class Wedge:
    """Excised monodromy wedge at a singularity.

    Crossing the enter-edge applies m -> m - <n, m> v (positions conjugated
    by the same shear fixing the singularity); the exit-edge applies the
    inverse.  Edge directions point away from the singularity.
    """

    pos: Vec
    n: tuple      # primitive covector, vanishing on the invariant direction
    v: tuple      # shear vector (parallel to the invariant direction)
    enter_dir: tuple
    exit_dir: tuple

    def t_fwd(self, m):
        s = self.n[0] * m[0] + self.n[1] * m[1]
        return (m[0] - s * self.v[0], m[1] - s * self.v[1])

    def t_bwd(self, m):
        s = self.n[0] * m[0] + self.n[1] * m[1]
        return (m[0] + s * self.v[0], m[1] + s * self.v[1])

    def map_point_fwd(self, p):
        rel = (p[0] - self.pos[0], p[1] - self.pos[1])
        s = self.n[0] * rel[0] + self.n[1] * rel[1]
        return (self.pos[0] + rel[0] - s * self.v[0],
                self.pos[1] + rel[1] - s * self.v[1])

    def map_point_bwd(self, p):
        rel = (p[0] - self.pos[0], p[1] - self.pos[1])
        s = self.n[0] * rel[0] + self.n[1] * rel[1]
        return (self.pos[0] + rel[0] + s * self.v[0],
                self.pos[1] + rel[1] + s * self.v[1])


@dataclass(frozen=True)
class HalfSlab:
    """Half of a bounded edge, from its singularity to one vertex.

    The normalized function is 1 + s^cls * z^w with w the primitive direction
    from the vertex toward the singularity.
    """

    sing: Vec
    vertex: Vec
    w: tuple          # function monomial direction
    cls: tuple        # curve-class marker exponents
    kink: int = 1


@dataclass(frozen=True)
class Ray:
    """Unbounded vertical edge of the polyhedral decomposition."""

    base: Vec
    kink: int
    label: tuple  # class label of the corresponding divisor


@dataclass(frozen=True)
class Seam:
    """Periodic identification x -> x + shift with shear y -> y - k*x + c."""

    x_left: Fraction
    x_right: Fraction
    shear: int
    offset: Fraction  # Phi(x, y) = (x + shift, y - shear*x + offset)
    ray_y_min: Fraction  # the boundary ray starts here (vertex height)
    ray_kink: int

    @property
    def shift(self):
        return self.x_right - self.x_left

    def fwd_point(self, p):  # left boundary -> right boundary region
        return (p[0] + self.shift, p[1] - self.shear * p[0] + self.offset)

    def bwd_point(self, p):
        q0 = p[0] - self.shift
        return (q0, p[1] + self.shear * q0 - self.offset)

    def fwd_vec(self, v):
        return (v[0], v[1] - self.shear * v[0])

    def bwd_vec(self, v):
        return (v[0], v[1] + self.shear * v[0])


@dataclass(frozen=True)
class FanPicture:
    """The unrolled chart of a toric del Pezzo fan picture."""

    name: str
    vertices: tuple          # ((pos, kink, ray_label), ...) left-to-right order
    half_slabs: tuple        # HalfSlab states
    wedges: tuple            # Wedge per singularity
    seam: Seam
    picard_rank: int
    m_out: tuple = (0, 1)

    # -- invariants ----------------------------------------------------

    def is_asym_cyl(self) -> bool:
        """All unbounded rays share the primitive direction m_out."""
        return self.m_out == (0, 1)

    def singularities(self):
        return tuple(w.pos for w in self.wedges)

    def vertex_kinks(self):
        return tuple(v[1] for v in self.vertices)

    def ray_labels(self):
        return tuple(v[2] for v in self.vertices)

    def check_fano(self):
        """Lemma-style flag condition: every slab half has |kink(v, w)| = 1
        against its vertex direction read in the chart."""
        for hs in self.half_slabs:
            d = (hs.sing[0] - hs.vertex[0], hs.sing[1] - hs.vertex[1])
            if primitive((int(2 * d[0]), int(2 * d[1]))) != hs.w:
                raise ValueError("half-slab monomial does not point to its singularity")
        return True


def builtin_p2() -> FanPicture:
    """The fan picture of the projective plane, unrolled.

    Central cell with vertices (+-1/2, 0) and (+-3/2, -3) (the bottom pair is
    one vertex through the seam); singularities at the edge midpoints; all
    vertex kinks 3; Picard rank 1 with every ray labeled by the hyperplane
    class.  Chart constants transcribed from the unrolled-figure conventions
    of the source pictures (periodicity (x, y) -> (x+3, y-9x-27/2)).
    """
    vp = (F(1, 2), F(0))
    vm = (F(-1, 2), F(0))
    vb = (F(3, 2), F(-3))
    vbp = (F(-3, 2), F(-3))
    s_c = (F(0), F(0))
    s_r = (F(1), F(-3, 2))
    s_l = (F(-1), F(-3, 2))
    half_slabs = (
        HalfSlab(s_c, vp, (-1, 0), (0,)),   # central, right half: 1 + x^-1
        HalfSlab(s_c, vm, (1, 0), (0,)),    # central, left half: 1 + x
        HalfSlab(s_r, vp, (1, -3), (0,)),   # right slab, upper half
        HalfSlab(s_r, vb, (-1, 3), (0,)),   # right slab, lower half
        HalfSlab(s_l, vm, (-1, -3), (0,)),  # left slab, upper half
        HalfSlab(s_l, vbp, (1, 3), (0,)),   # left slab, lower half
    )
    wedges = (
        Wedge(s_c, (0, 1), (-1, 0), (1, -2), (-1, -2)),
        Wedge(s_r, (3, 1), (1, -3), (-1, 1), (1, -5)),
        Wedge(s_l, (-3, 1), (-1, -3), (1, 1), (-1, -5)),
    )
    vertices = (
        ((F(-3, 2), F(-3)), 3, (1,)),
        (vm, 3, (1,)),
        (vp, 3, (1,)),
    )
    seam = Seam(x_left=F(-3, 2), x_right=F(3, 2), shear=9, offset=F(-27, 2),
                ray_y_min=F(-3), ray_kink=3)
    return FanPicture("p2", vertices, half_slabs, wedges, seam, picard_rank=1)


def builtin_f1() -> FanPicture:
    """The fan picture of the Hirzebruch surface F1 (blown-up plane).

    Derived from the plane chart by the corner blow-up construction: new
    vertex with kink 1, adjacent kinks reduced to 2, an exceptional ray
    labeled C, periodicity shear 8.  Classes in the (L, C) basis.
    """
    u_b = (F(3, 2), F(-3))
    u1 = (F(1, 2), F(0))
    u2 = (F(-1, 2), F(1))
    u3 = (F(-3, 2), F(1))
    u4 = (F(-5, 2), F(-1))
    s_a = (F(1), F(-3, 2))   # on [u_b, u1], survives from the plane
    s_b = (F(0), F(1, 2))    # on [u1, u2], new (delta_1)
    s_c = (F(-1), F(1))      # on [u2, u3], new (delta_2)
    s_d = (F(-2), F(0))      # on [u3, u4], survives from the plane
    half_slabs = (
        HalfSlab(s_a, u1, (1, -3), (0, 0)),
        HalfSlab(s_a, u_b, (-1, 3), (0, 0)),
        HalfSlab(s_b, u1, (-1, 1), (0, 1)),
        HalfSlab(s_b, u2, (1, -1), (0, 1)),
        HalfSlab(s_c, u2, (-1, 0), (0, 1)),
        HalfSlab(s_c, u3, (1, 0), (0, 1)),
        HalfSlab(s_d, u3, (-1, -2), (0, 0)),
        HalfSlab(s_d, u4, (1, 2), (0, 0)),
    )
    wedges = (
        Wedge(s_a, (3, 1), (-1, 3), (1, -4), (0, -1)),
        Wedge(s_b, (1, 1), (1, -1), (0, -1), (1, -2)),
        Wedge(s_c, (0, 1), (-1, 0), (1, -2), (-1, -2)),
        Wedge(s_d, (-2, 1), (-1, -2), (0, -1), (-1, -3)),
    )
    vertices = (
        (u3, 2, (1, -1)),
        (u2, 1, (0, 1)),
        (u1, 2, (1, -1)),
    )
    # the kink-3 vertex u_b sits on the seam; Phi(x,y) = (x+4, y-8x-22)
    # maps u4 = (-5/2,-1) to u_b = (3/2,-3).
    seam = Seam(x_left=F(-5, 2), x_right=F(3, 2), shear=8, offset=F(-22),
                ray_y_min=F(-3), ray_kink=3)
    return FanPicture("f1", vertices, half_slabs, wedges, seam, picard_rank=2)


@dataclass(frozen=True)
class BlowUpResult:
    picture: FanPicture
    pullback: tuple  # matrix rows mapping old class vectors into new basis
    new_vertex_kink: int
    old_adjacent_kinks: tuple
    exceptional_label: tuple


def blow_up(f: FanPicture, cell: str = "top") -> BlowUpResult:
    """Corner blow-up of the plane picture (construction on the top cell).

    Checks the Fano/length-1 precondition, inserts the new vertex with kink 1,
    reduces the adjacent kinks by one and returns the class pullback
    (d) -> (d, 0) into the (L, C) basis.
    """
    if f.name != "p2" or cell != "top":
        raise ValueError("blow-up is implemented for the top cell of the plane chart")
    # affine length of the blown-up bounded edge must be 1
    vp, vm = (F(1, 2), F(0)), (F(-1, 2), F(0))
    if vp[0] - vm[0] != 1:
        raise ValueError("bounded edge of the blown-up cell must have affine length 1")
    picture = builtin_f1()
    return BlowUpResult(
        picture=picture,
        pullback=((1, 0),),
        new_vertex_kink=1,
        old_adjacent_kinks=(2, 2),
        exceptional_label=(0, 1),
    )


def seam_width(f: FanPicture) -> Fraction:
    return f.seam.x_right - f.seam.x_left
