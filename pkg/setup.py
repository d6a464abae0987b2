from setuptools import setup  # type: ignore

if __name__ == "__main__":
    setup()
