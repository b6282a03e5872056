"""Quaternion and biquaternion analysis toolkit."""

from .algebra import I, J, K, BiQuat, hermitian, quat

__all__ = ["BiQuat", "I", "J", "K", "hermitian", "quat"]
__version__ = "0.1.0"
