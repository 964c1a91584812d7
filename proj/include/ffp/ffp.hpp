#ifndef FFP_FFP_HPP
#define FFP_FFP_HPP

#include "baseline.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "explain.hpp"
#include "fingerprint.hpp"
#include "format.hpp"
#include "library.hpp"
#include "library_io.hpp"
#include "metrics.hpp"
#include "synthetic.hpp"
#include "vectorizer.hpp"

#endif
