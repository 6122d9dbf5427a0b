"""
Quick script to verify installation and basic functionality.
Run this to check if all dependencies are installed correctly.
"""

import importlib
import sys

REQUIRED_PACKAGES = ['yaml', 'numpy', 'scipy', 'pandas', 'matplotlib']
PROJECT_MODULES = ['core', 'models', 'utils', 'reports', 'cli', 'workflow']


def test_imports():
    """Try to import every dependency and project package."""
    print("Testing imports...")
    errors = []
    for name in REQUIRED_PACKAGES + PROJECT_MODULES:
        try:
            importlib.import_module(name)
            print(f"[OK] {name}")
        except ImportError as e:
            errors.append(f"[FAIL] {name}: {e}")
            print(f"[FAIL] {name}")
    return errors


def test_basic_functionality():
    """Interpolate the determinant of a small tuple."""
    print("\nTesting basic functionality...")
    try:
        from core.demos import clock_shift_tuple
        from core.detpoly import interpolate_det

        poly = interpolate_det(clock_shift_tuple(3))
        z0_cubed = poly.coefficient((3, 0))
        z1_cubed = poly.coefficient((0, 3))
        print(f"[OK] det(z0 U + z1 V) for q=3: {z0_cubed.real:+.3f} z0^3 {z1_cubed.real:+.3f} z1^3")
        return True
    except Exception as e:
        print(f"[FAIL] Determinant interpolation failed: {e}")
        return False


def main():
    """Run all checks."""
    print("=" * 50)
    print("projspec Installation Test")
    print("=" * 50)
    print(f"Python version: {sys.version}")
    print()

    errors = test_imports()
    func_ok = test_basic_functionality()

    print("\n" + "=" * 50)
    if errors:
        print(f"[WARNING] Found {len(errors)} import error(s):")
        for error in errors:
            print(f"  {error}")
        print("\nTo fix, run: pip install -r requirements.txt")
    else:
        print("[OK] All imports successful!")

    if not errors and func_ok:
        print("\n[SUCCESS] Installation is complete and working!")
        print("  python run_cli.py --help")
    else:
        print("\n[WARNING] Please fix the errors above before using the toolkit")
    print("=" * 50)


if __name__ == '__main__':
    main()
