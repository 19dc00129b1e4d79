_base_ = ['./isotropic.py']

sigma = [4.0, 2.0, 1.0, 0.5]
