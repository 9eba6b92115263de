"""Unit conversions. Internals are SI (m, rad, N, s, K); kgf and degrees
appear only at file/CLI boundaries."""

KGF_TO_NEWTON = 9.80665


def kgf_to_newton(x):
    return x * KGF_TO_NEWTON


def newton_to_kgf(x):
    return x / KGF_TO_NEWTON
