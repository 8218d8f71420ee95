#ifndef BTN_VERIFY_HPP
#define BTN_VERIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace btn::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs the full verification suite, one pass/fail line per criterion on os.
/// Returns the number of failed criteria.
int run_acceptance(std::ostream& os);

} // namespace btn::verify

#endif
