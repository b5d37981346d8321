"""Namespaced package of pyfair.marketlib."""
__path__ = __import__('pkgutil').extend_path(__path__, __name__)
