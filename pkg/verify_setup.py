#!/usr/bin/env python3
"""
Setup verification script - checks if memdse is properly installed and its data is intact
"""
import sys
import json
from pathlib import Path

def check_python_version():
    """Check Python version"""
    version = sys.version_info
    if version.major >= 3 and version.minor >= 8:
        print(f"✅ Python {version.major}.{version.minor}.{version.micro}")
        return True
    else:
        print(f"❌ Python {version.major}.{version.minor}.{version.micro} - Need Python 3.8+")
        return False

def check_project_structure():
    """Check project structure"""
    required_files = [
        'memdse/__init__.py',
        'memdse/config.py',
        'memdse/main.py',
        'memdse/workload/loader.py',
        'memdse/arch/model.py',
        'memdse/mapper/mapper.py',
        'memdse/mapper/oracle.py',
        'memdse/technology/library.py',
        'memdse/energy/model.py',
        'memdse/timing/model.py',
        'memdse/duty_cycle/model.py',
        'memdse/area/model.py',
        'memdse/report/scenario.py',
        'requirements.txt',
        'README.md'
    ]

    missing_files = []
    for file_path in required_files:
        if not Path(file_path).exists():
            missing_files.append(file_path)

    if not missing_files:
        print(f"✅ Project structure complete ({len(required_files)} files)")
        return True
    else:
        print(f"❌ Missing files: {', '.join(missing_files)}")
        return False

def check_dependencies():
    """Check if dependencies can be imported"""
    required_modules = [
        'numpy',
        'pandas',
        'joblib',
        'dotenv'
    ]

    missing_modules = []
    for module in required_modules:
        try:
            __import__(module)
        except ImportError:
            missing_modules.append(module)

    if not missing_modules:
        print(f"✅ All dependencies available")
        return True
    else:
        print(f"❌ Missing dependencies: {', '.join(missing_modules)}")
        print("   Install with: pip install -r requirements.txt")
        return False

def check_configuration():
    """Check configuration and the technology library"""
    try:
        sys.path.insert(0, '.')
        from memdse.config import config
        from memdse.technology.library import load_tech_library

        library = load_tech_library()
        print("✅ Configuration loaded successfully")
        print(f"   Technology file: {config.data.tech_path}")
        print(f"   Nodes: {', '.join(f'{n} nm' for n in library.nodes)}")
        print(f"   Sweep workers: {config.sweep.max_workers}")
        return True

    except Exception as e:
        print(f"❌ Configuration error: {e}")
        return False

def check_data_files():
    """Check bundled architectures and networks"""
    data_dir = Path('memdse/data')
    required = ['tech.json', 'architectures.json', 'networks/detnet.json', 'networks/edsnet.json']

    missing = []
    for name in required:
        path = data_dir / name
        if not path.exists():
            missing.append(name)
            continue
        try:
            if json.loads(path.read_text()).get('schema') != 1:
                missing.append(f"{name} (schema)")
        except json.JSONDecodeError:
            missing.append(f"{name} (malformed)")

    if not missing:
        print(f"✅ Data files complete ({len(required)} files)")
        return True
    else:
        print(f"❌ Data problems: {', '.join(missing)}")
        return False

def main():
    """Run setup verification"""
    print("🔍 memdse Setup Verification")
    print("=" * 50)

    checks = [
        ("Python Version", check_python_version),
        ("Project Structure", check_project_structure),
        ("Dependencies", check_dependencies),
        ("Configuration", check_configuration),
        ("Data Files", check_data_files)
    ]

    all_passed = True

    for check_name, check_func in checks:
        print(f"\n{check_name}:")
        try:
            if not check_func():
                all_passed = False
        except Exception as e:
            print(f"❌ {check_name} failed: {e}")
            all_passed = False

    print("\n" + "=" * 50)

    if all_passed:
        print("🎉 Setup verification passed!")
        print("\nNext steps:")
        print("1. Run: python3 -m memdse.main area")
        print("2. Run: python3 -m memdse.main latency")
        print("3. Run: python3 -m memdse.main ips-sweep --out results/ips")
        print("4. Run tests: pytest")
    else:
        print("⚠️  Setup verification failed!")
        print("Please fix the issues above before proceeding.")

    return all_passed

if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
