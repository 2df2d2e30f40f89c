"""Exact certificates for positive solutions of sparse polynomial systems via Gale duality."""

from __future__ import annotations

from galecert.certificate import Certificate, Method, Status, recheck
from galecert.certifier import CertifierConfig, GaleInput, certify_auto, certify_real_orthants
from galecert.numeric import VerifierConfig, count_positive_roots_direct, gale_roots

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CertifierConfig",
    "GaleInput",
    "Method",
    "Status",
    "VerifierConfig",
    "certify_auto",
    "certify_real_orthants",
    "count_positive_roots_direct",
    "gale_roots",
    "recheck",
]
