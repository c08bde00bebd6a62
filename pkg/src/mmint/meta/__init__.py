from mmint.meta import experiments as exp
