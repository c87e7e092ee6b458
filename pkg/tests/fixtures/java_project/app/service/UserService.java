package app.service;

import app.data.Repo;
import app.service.OrderService;

import java.util.ArrayList;
import java.util.List;

public class UserService {
    private final Repo repo = new Repo();

    public List<String> names() {
        return new ArrayList<>();
    }
}
