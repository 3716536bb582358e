#include "app.hpp"

int main(int argc, char** argv) {
  fofx::cli::App app;
  return app.run(argc, argv);
}
