_base_ = ['./isotropic.py']

p = 0.0
