"""
Setup verification
Run this after setup (python test_setup.py) to ensure everything is working;
pytest collects the same checks
"""
import sys
import logging

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def check_imports() -> bool:
    """Check that all required modules can be imported"""
    print("Testing imports...")
    try:
        from config.settings import settings
        from network.cuts import cut_table
        from network.feasibility import check_feasible
        from solvers.exact import exact_oracle
        from solvers.flex_st import solve_22
        from solvers.fgc import solve_fgc
        from solvers.lp import cutting_plane_solve
        from solvers.steiner import solve_rooted_steiner
        from orchestrator import orchestrator

        print("✅ All imports successful")
        return True
    except Exception as e:
        print(f"❌ Import failed: {e}")
        return False


def check_configuration() -> bool:
    """Check configuration settings"""
    print("\nTesting configuration...")
    try:
        from config.settings import settings

        print(f"  Log level: {settings.log_level} ({settings.log_format})")
        print(f"  Cut enumeration bound: {settings.cut_enumeration_bound} vertices")
        print(f"  Exact oracle bound: {settings.oracle_edge_bound} edges")
        print(f"  LP tolerance: {settings.lp_feasibility_tol}")
        print(f"  Cache Results: {settings.cache_results}")

        print("✅ Configuration loaded")
        return True
    except Exception as e:
        print(f"❌ Configuration test failed: {e}")
        return False


def check_named_instances() -> bool:
    """Check that the named instances build and pass their checklists"""
    print("\nTesting named instances...")
    try:
        from instances.named import BUILDERS, gen_paper

        for name in BUILDERS:
            parameters = {"k": 2} if name == "GAP" else {"p": 3} if name == "FIG-FGC-P4ODD" else {}
            instance = gen_paper(name, **parameters)
            print(f"  {instance.name}: {instance.graph.vertex_count} vertices, {instance.graph.edge_count} edges")

        print("✅ Named instances verified")
        return True
    except Exception as e:
        print(f"❌ Named instance test failed: {e}")
        return False


def check_solvers() -> bool:
    """Solve the extended (2,2) figure with the approximation, the oracle and the LP"""
    print("\nTesting solvers...")
    try:
        from instances.named import gen_paper
        from orchestrator import orchestrator

        report = orchestrator.evaluate(gen_paper("FIG-ST22", extended=True), "flex-st")
        print(f"  Cost {report['solution']['cost']}, optimum {report['optimum']}, LP {report['lp_value']:.4f}")

        if report["status"] != "success" or not report["feasible"]:
            print(f"❌ Solver run failed: {report.get('message') or report.get('verdict')}")
            return False
        print("✅ Solvers working")
        return True
    except Exception as e:
        print(f"❌ Solver test failed: {e}")
        return False


def test_imports():
    assert check_imports()


def test_configuration():
    assert check_configuration()


def test_named_instances():
    assert check_named_instances()


def test_solvers():
    assert check_solvers()


def main():
    """Run all checks"""
    print("=" * 60)
    print("FlexNet Solver Suite - Setup Verification")
    print("=" * 60)

    results = []

    results.append(("Imports", check_imports()))
    results.append(("Configuration", check_configuration()))
    results.append(("Named Instances", check_named_instances()))
    results.append(("Solvers", check_solvers()))

    print("\n" + "=" * 60)
    print("Test Results Summary")
    print("=" * 60)

    for test_name, passed in results:
        status = "✅ PASS" if passed else "❌ FAIL"
        print(f"{test_name:.<40} {status}")

    all_passed = all(passed for _, passed in results)

    print("=" * 60)

    if all_passed:
        print("\n✅ All checks passed! You're ready to run the solvers.")
        print("\nTo get started:")
        print("  python cli.py gen GAP --k 4 -o data/instances/gap4.txt")
        print("  python cli.py lp data/instances/gap4.txt")
    else:
        print("\n⚠️  Some checks failed. Please check the errors above.")
        print("\nCommon issues:")
        print("  - Dependencies missing: pip install -r requirements.txt")
        print("  - .env file with an invalid FLEXNET_ value")

    print()

    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
