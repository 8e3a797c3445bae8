from .kernels import CurvatureContext
