"""
polyfilter/factory.py
🏭 Polynomial Basis Factory
"""
import logging
from typing import Any, Dict

from errors import ParameterError
from .base import PolynomialBasis
from .bases import ChebyshevBasis, JacobiBasis, LegendreBasis, PowerBasis

logger = logging.getLogger(__name__)


class BasisFactory:
    """
    Factory để tạo polynomial bases
    """

    _bases = {
        'power': PowerBasis,
        'chebyshev': ChebyshevBasis,
        'legendre': LegendreBasis,
        'jacobi': JacobiBasis,
    }

    @classmethod
    def create(
        cls,
        basis_type: str,
        config: Dict[str, Any] = None
    ) -> PolynomialBasis:
        """
        Tạo basis instance

        Args:
            basis_type: Type of basis ('chebyshev', 'legendre', etc.)
            config: Basis parameters (Jacobi: {'a': ..., 'b': ...})

        Returns:
            PolynomialBasis: Basis instance

        Raises:
            ParameterError: If basis type not supported
        """
        basis_type = basis_type.lower()

        if basis_type not in cls._bases:
            available = ', '.join(cls._bases.keys())
            raise ParameterError(
                f"Unknown polynomial basis: {basis_type}. "
                f"Available: {available}"
            )

        basis_class = cls._bases[basis_type]
        logger.debug(f"🏭 Creating {basis_type} basis...")
        return basis_class(config=config)

    @classmethod
    def from_info(cls, info: Dict[str, Any]) -> PolynomialBasis:
        """Inverse of PolynomialBasis.get_basis_info()"""
        return cls.create(info['name'], info.get('params'))

    @classmethod
    def register_basis(cls, name: str, basis_class: type):
        """
        Register new polynomial basis

        Args:
            name: Basis name
            basis_class: Basis class (must inherit from PolynomialBasis)
        """
        if not issubclass(basis_class, PolynomialBasis):
            raise TypeError(
                f"{basis_class} must inherit from PolynomialBasis"
            )

        cls._bases[name] = basis_class
        logger.info(f"✅ Registered polynomial basis: {name}")

    @classmethod
    def get_available_bases(cls) -> list:
        """Get list of available bases"""
        return list(cls._bases.keys())

    @classmethod
    def basis_exists(cls, basis_type: str) -> bool:
        """Check if basis exists"""
        return basis_type.lower() in cls._bases
