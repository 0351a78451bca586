"""Degree-(2,2,2) surfaces and their three fiberwise involutions.

A surface here is the zero set of a trilinear-quadratic polynomial
sum c_ijk x^i y^j z^k (i, j, k <= 2) in C^3.  Projecting away one
coordinate makes the surface a double cover of the other two, and
swapping the two sheets is an involution computed exactly from the
fiber quadratic by the root-sum formula t -> -B/A - t.
"""

import numpy as np

from k3gaps import surface as S

c = S.wehler_example()
print("== the example surface ==")
print("(1 + x^2)(1 + y^2)(1 + z^2) + x y z - 1 = 0")
print(f"value at the origin: {S.evaluate(c, (0, 0, 0))}")
print(f"gradient at the origin: {S.gradient(c, (0, 0, 0))}")
print(f"singular there (fixed point of all three involutions): "
      f"{S.is_singular_at(c, (0, 0, 0))}")

print()
print("== involutions swap the two sheets of the fiber quadratic ==")
# construct a surface point over (x, y) = (0.1, 0.05) by solving the
# fiber quadratic A z^2 + B z + C = 0 for z
xy = np.array([[0.1, 0.05, 0.0]], dtype=complex)
A, B, C = S.axis_quadratic(c, "z", xy)
z = np.roots([A[0], B[0], C[0]])[0]
p = (xy[0, 0], xy[0, 1], z)
q, drift = S.apply_word(S.Word.parse("z"), c, p)
print(f"point on surface:   {np.round(p, 6)}")
print(f"after sigma_z:      {np.round(q.coords, 6)}")
print(f"z + sigma_z(z) = -B/A: {q.coords[2] + p[2]:.6f} vs {-B[0] / A[0]:.6f}")
print(f"image residual {q.residual:.2e}, per-step drift "
      f"{drift.max_step_residual:.2e}")

print()
print("== derivatives at the common fixed point ==")
print("At the origin each involution acts, to first order, by flipping")
print("exactly its own coordinate:")
for axis in ("x", "y", "z"):
    J = S.derivative_at_fixed_point(axis, c, (0, 0, 0))
    diag = tuple(float(v) for v in np.round(np.diag(J).real, 12))
    print(f"  d(sigma_{axis}) = diag{diag}")

print()
print("== perturbations and serialization ==")
pert = S.PerturbationSpec(c, magnitude=1e-3, mode="complex", seed=1)
c2 = pert.realize()
print(f"perturbed all 27 coefficients by complex noise of size 1e-3; "
      f"max change {np.max(np.abs(c2.c - c.c)):.2e}")
text = S.coefficients_to_toml(c2)
c3 = S.coefficients_from_toml(text)
print(f"TOML round trip exact: {np.array_equal(c2.c, c3.c)}")
print(f"(first line: {text.splitlines()[0]})")
